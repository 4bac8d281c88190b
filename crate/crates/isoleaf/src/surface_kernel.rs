//! Individual surfaces of H(1,1,−2) in chamber coordinates and the normal
//! forms of wall surfaces.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::{complex_cross as cross, Cx, ExactField, Rational};
use crate::period_algebra::{volume, LatticeElement, PeriodCharacter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("invalid surface: {0}")]
    InvalidSurface(&'static str),
    #[error("point is not on the chamber boundary")]
    NotOnBoundary,
    #[error("side index {0} is not 1, 2 or 3")]
    BadSideIndex(usize),
    #[error("({k},{l}) is not an admissible cylinder index")]
    NotAdmissible { k: u64, l: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoreType {
    TorusType,
    CylinderType,
    DegenerateType,
}

/// Which zero sits at the left end of the slit picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Marking {
    BlackFirst,
    WhiteFirst,
}

impl Marking {
    pub fn swapped(self) -> Marking {
        match self {
            Marking::BlackFirst => Marking::WhiteFirst,
            Marking::WhiteFirst => Marking::BlackFirst,
        }
    }
}

/// `S(l1, l2, l3)`: a plane slit along a horizontal segment of length
/// `l1 + l2 + l3` with the three pieces re-identified in reverse order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlitDegenerateSurface {
    pub l: [Rational; 3],
    pub marking: Marking,
}

impl SlitDegenerateSurface {
    pub fn new(l1: Rational, l2: Rational, l3: Rational) -> Result<Self, SurfaceError> {
        if l1.is_positive() && l2.is_positive() && l3.is_positive() {
            Ok(SlitDegenerateSurface { l: [l1, l2, l3], marking: Marking::BlackFirst })
        } else {
            Err(SurfaceError::InvalidSurface("slit lengths must be positive"))
        }
    }

    pub fn swap_marking(mut self) -> Self {
        self.marking = self.marking.swapped();
        self
    }

    pub fn total_length(&self) -> Rational {
        self.l.iter().cloned().sum()
    }
}

impl fmt::Display for SlitDegenerateSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.l;
        write!(f, "S({a},{b},{c})")
    }
}

/// Surfaces met on the boundary of an arithmetic cylinder chamber.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WallSurface {
    Slit(SlitDegenerateSurface),
    /// A vertex of the wall: a surface of H(2,−2) in the completion.
    PointInH2m2,
    /// The center of the arithmetic leaf.
    PinchedTorus,
}

/// Two wall surfaces agree as marked surfaces: same ordered triple with the
/// labels of the two zeros exchanged.
pub fn marked_match(a: &WallSurface, b: &WallSurface) -> bool {
    match (a, b) {
        (WallSurface::Slit(x), WallSurface::Slit(y)) => x.l == y.l && x.marking != y.marking,
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderSurface<R> {
    pub u: Cx<R>,
    pub v: Cx<R>,
    pub z: Cx<R>,
}

impl<R: ExactField> CylinderSurface<R> {
    pub fn new(u: Cx<R>, v: Cx<R>, z: Cx<R>) -> Result<Self, SurfaceError> {
        let s = CylinderSurface { u, v, z };
        if s.is_valid() {
            Ok(s)
        } else {
            Err(SurfaceError::InvalidSurface("cylinder parallelograms must have positive area"))
        }
    }

    /// `Im(ū·v)`
    pub fn volume(&self) -> R {
        cross(&self.u, &self.v)
    }

    /// `Im(ū z) < min(0, Vol)`
    pub fn is_valid(&self) -> bool {
        if self.u.is_zero() {
            return false;
        }
        let vol = self.volume();
        let m = if vol.is_neg() { vol } else { R::zero() };
        cross(&self.u, &self.z).cmp_exact(&m) == Ordering::Less
    }

    /// The two parallelogram conditions separately.
    pub fn parallelograms_positive(&self) -> (bool, bool) {
        let p = cross(&self.u, &self.z).is_neg();
        let q = cross(&self.u, &(self.z.clone() - self.v.clone())).is_neg();
        (p, q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSurface<R> {
    pub g1: Cx<R>,
    pub g2: Cx<R>,
    pub alpha: Cx<R>,
}

impl<R: ExactField> TorusSurface<R> {
    /// A torus of periods `g1, g2` with a slit of holonomy `alpha`.
    pub fn new(g1: Cx<R>, g2: Cx<R>, alpha: Cx<R>) -> Result<Self, SurfaceError> {
        let s = TorusSurface { g1, g2, alpha };
        if cross(&s.g1, &s.g2).is_zero() {
            return Err(SurfaceError::InvalidSurface("torus periods must span a lattice"));
        }
        if !s.slit_is_embedded() {
            return Err(SurfaceError::InvalidSurface("slit wraps onto itself"));
        }
        Ok(s)
    }

    /// A torus-type surface realizing `chi`; only positive characters admit one.
    pub fn realizing(chi: &PeriodCharacter<R>, alpha: Cx<R>) -> Result<Self, SurfaceError> {
        if !volume(chi).is_pos() {
            return Err(SurfaceError::InvalidSurface("torus type needs positive volume"));
        }
        TorusSurface::new(chi.g1().clone(), chi.g2().clone(), alpha)
    }

    /// `alpha ≠ 0` and `alpha ∉ {tγ : γ primitive, t ≥ 1}`.
    pub fn slit_is_embedded(&self) -> bool {
        if self.alpha.is_zero() {
            return false;
        }
        let m = crate::field::Mat2::from_columns(&self.g1, &self.g2);
        let Some(inv) = m.inverse() else {
            return false;
        };
        let c = inv.apply(&self.alpha);
        let (x, y) = (c.re, c.im);
        let t = if y.is_zero() {
            x.abs_exact()
        } else if x.is_zero() {
            y.abs_exact()
        } else {
            let Some(r) = (x.clone() / y).as_rational() else {
                return true;
            };
            // primitive direction (p, q) with p/q = r
            let p = R::from_rational(Rational::from_integer(r.numer().abs()));
            x.abs_exact() / p
        };
        t.cmp_exact(&R::one()) == Ordering::Less
    }
}

/// Complement of a convex hexagon `B1 W1 B2 W2 B3 W3` with opposite sides
/// identified; `z2 = z1 + u2`, `z3 = z1 − u1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexagonSurface<R> {
    pub u: [Cx<R>; 3],
    pub z1: Cx<R>,
}

impl<R: ExactField> HexagonSurface<R> {
    pub fn new(u: [Cx<R>; 3], z1: Cx<R>) -> Result<Self, SurfaceError> {
        let s = HexagonSurface { u, z1 };
        if !s.triple_is_characteristic() {
            return Err(SurfaceError::InvalidSurface("not a characteristic triple"));
        }
        if !s.is_valid() {
            return Err(SurfaceError::InvalidSurface("hexagon inequalities fail"));
        }
        Ok(s)
    }

    pub fn from_lattice(
        chi: &PeriodCharacter<R>,
        u: [LatticeElement; 3],
        z1: Cx<R>,
    ) -> Result<Self, SurfaceError> {
        HexagonSurface::new([chi.value(u[0]), chi.value(u[1]), chi.value(u[2])], z1)
    }

    fn triple_is_characteristic(&self) -> bool {
        let [a, b, c] = &self.u;
        let sum = a.clone() + b.clone() + c.clone();
        let v = cross(a, b);
        sum.is_zero() && v.is_neg() && cross(b, c) == v && cross(c, a) == v
    }

    pub fn z(&self) -> [Cx<R>; 3] {
        let z2 = self.z1.clone() + self.u[1].clone();
        let z3 = self.z1.clone() - self.u[0].clone();
        [self.z1.clone(), z2, z3]
    }

    /// `Im(z_i ū_i) > 0` for each `i`.
    pub fn is_valid(&self) -> bool {
        let z = self.z();
        (0..3).all(|i| cross(&self.u[i], &z[i]).is_pos())
    }

    /// `[B1, W1, B2, W2, B3, W3]` with `B1 = 0`.
    pub fn vertices(&self) -> [Cx<R>; 6] {
        let z = self.z();
        let b1 = Cx::zero();
        let b2 = self.u[0].clone();
        let b3 = b2.clone() + self.u[1].clone();
        [
            b1.clone(),
            b1 + z[0].clone(),
            b2.clone(),
            b2 + z[1].clone(),
            b3.clone(),
            b3 + z[2].clone(),
        ]
    }

    /// Area of the triangle spanned by the three black corners.
    pub fn black_triangle_area(&self) -> R {
        let v = self.vertices();
        let a = cross(&(v[2].clone() - v[0].clone()), &(v[4].clone() - v[0].clone()));
        a.abs_exact() / R::from_int(2)
    }

    /// Angles of the polar domain at the six corners, in radians, in the
    /// order of [`HexagonSurface::vertices`].
    pub fn sector_angles(&self) -> [f64; 6] {
        let v: Vec<(f64, f64)> = self
            .vertices()
            .iter()
            .map(|p| (p.re.to_f64(), p.im.to_f64()))
            .collect();
        let mut out = [0.0; 6];
        for i in 0..6 {
            let p = v[i];
            let prev = v[(i + 5) % 6];
            let next = v[(i + 1) % 6];
            let a = (prev.0 - p.0, prev.1 - p.1);
            let b = (next.0 - p.0, next.1 - p.1);
            let interior = (a.0 * b.1 - a.1 * b.0).abs().atan2(a.0 * b.0 + a.1 * b.1);
            out[i] = 2.0 * std::f64::consts::PI - interior;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surface<R> {
    Torus(TorusSurface<R>),
    Cylinder(CylinderSurface<R>),
    Hexagon(HexagonSurface<R>),
    Slit(SlitDegenerateSurface),
}

pub fn core_type<R: ExactField>(surface: &Surface<R>) -> Result<CoreType, SurfaceError> {
    match surface {
        Surface::Torus(t) if t.slit_is_embedded() => Ok(CoreType::TorusType),
        Surface::Cylinder(c) if c.is_valid() => Ok(CoreType::CylinderType),
        Surface::Hexagon(h) if h.is_valid() => Ok(CoreType::DegenerateType),
        Surface::Slit(s) if s.l.iter().all(|x| x.is_positive()) => Ok(CoreType::DegenerateType),
        _ => Err(SurfaceError::InvalidSurface("invariants fail")),
    }
}

/// Torus type forces positive volume, degenerate type non-positive volume,
/// hexagon form negative volume.
pub fn volume_constraint_check<R: ExactField>(surface: &Surface<R>, chi: &PeriodCharacter<R>) -> bool {
    let vol = volume(chi);
    match surface {
        Surface::Torus(_) => vol.is_pos(),
        Surface::Cylinder(_) => true,
        Surface::Hexagon(_) => vol.is_neg(),
        Surface::Slit(_) => !vol.is_pos(),
    }
}

pub fn is_admissible(k: u64, l: u64) -> bool {
    k >= 1 && l < k && k.gcd(&l) == 1
}

/// Surface reached on the boundary of `CC^sign_{k,l}` at real coordinate `t`.
///
/// The minus chamber is the image of the plus chamber under `w ↦ −w`, which
/// exchanges the two zeros.
pub fn cylinder_boundary_surface(
    k: u64,
    l: u64,
    sign: Sign,
    t: &Rational,
) -> Result<WallSurface, SurfaceError> {
    if !is_admissible(k, l) {
        return Err(SurfaceError::NotAdmissible { k, l });
    }
    match sign {
        Sign::Plus => Ok(plus_boundary(k, l, t)),
        Sign::Minus => Ok(match plus_boundary(k, l, &-t.clone()) {
            WallSurface::Slit(s) => WallSurface::Slit(s.swap_marking()),
            other => other,
        }),
    }
}

/// Same as [`cylinder_boundary_surface`] for a point given in the complex
/// chamber chart.
pub fn cylinder_boundary_point(
    k: u64,
    l: u64,
    sign: Sign,
    z: &Cx<Rational>,
) -> Result<WallSurface, SurfaceError> {
    if !z.im.is_zero() {
        return Err(SurfaceError::NotOnBoundary);
    }
    cylinder_boundary_surface(k, l, sign, &z.re)
}

fn plus_boundary(k: u64, l: u64, t: &Rational) -> WallSurface {
    let kq = Rational::from_integer(BigInt::from(k));
    let lq = Rational::from_integer(BigInt::from(l));
    if t.is_zero() {
        return if k == 1 { WallSurface::PinchedTorus } else { WallSurface::PointInH2m2 };
    }
    let slit = |a: Rational, b: Rational, c: Rational| {
        WallSurface::Slit(SlitDegenerateSurface { l: [a, b, c], marking: Marking::BlackFirst })
    };
    let at = t.abs();
    if t.is_negative() && *t > lq.clone() - kq.clone() {
        // l−k < t < 0
        return slit(at.clone(), kq - lq.clone() - at.clone(), lq + at);
    }
    if t.is_positive() && *t < lq {
        // 0 < t < l
        return slit(kq + t.clone() - lq.clone(), lq - t.clone(), t.clone());
    }
    // remaining cases: t beyond l (right) or beyond l−k (left)
    let rel = (t.clone() - lq.clone()) / kq.clone();
    if rel.is_integer() {
        return WallSurface::PointInH2m2;
    }
    if t.is_positive() {
        // nk+l < t < (n+1)k+l
        let n = Rational::from_integer(rel.floor().to_integer());
        slit(
            t.clone() - lq.clone() - n.clone() * kq.clone(),
            (n + Rational::one()) * kq + lq - t.clone(),
            t.clone(),
        )
    } else {
        // −(n+1)k+l < t < −nk+l with n ≥ 1
        let n = Rational::from_integer((-rel).floor().to_integer());
        slit(
            at.clone(),
            (n.clone() + Rational::one()) * kq.clone() - lq.clone() - at.clone(),
            lq + at - n * kq,
        )
    }
}

/// A point of the hexagon chamber boundary: the surface has become the
/// complement of a parallelogram and lies on the boundary of `CC_{u_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexagonBoundary<R> {
    pub side: usize,
    pub borders: LatticeElement,
    /// Point in the `z1` chart of the hexagon chamber.
    pub z1: Cx<R>,
    /// The same point in the chart of `CC_{u_i}`.
    pub cylinder_point: Cx<R>,
    /// Sides of the degenerate parallelogram: the cylinder period and the
    /// crossing period.
    pub parallelogram: [Cx<R>; 2],
}

/// Boundary point at parameter `s ∈ [0,1]` along side `side` of the hexagon
/// chamber of the ordered triple `u`.
pub fn hexagon_boundary_surface<R: ExactField>(
    chi: &PeriodCharacter<R>,
    u: [LatticeElement; 3],
    side: usize,
    s: &R,
) -> Result<HexagonBoundary<R>, SurfaceError> {
    if !(1..=3).contains(&side) {
        return Err(SurfaceError::BadSideIndex(side));
    }
    if s.is_neg() || s.cmp_exact(&R::one()) == Ordering::Greater {
        return Err(SurfaceError::NotOnBoundary);
    }
    let v = [chi.value(u[0]), chi.value(u[1]), chi.value(u[2])];
    let (z1, offset) = match side {
        1 => (v[0].scale(s), v[1].clone()),
        2 => (-v[1].scale(s), -v[0].clone()),
        _ => (v[0].clone() + v[2].scale(s), Cx::zero()),
    };
    let i = side - 1;
    Ok(HexagonBoundary {
        side,
        borders: u[i],
        cylinder_point: z1.clone() + offset,
        z1,
        parallelogram: [v[i].clone(), v[(i + 1) % 3].clone()],
    })
}

/// Lengths as `f64`, for display.
pub fn slit_lengths_f64(s: &SlitDegenerateSurface) -> [f64; 3] {
    [0, 1, 2].map(|i| ExactField::to_f64(&s.l[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};
    use crate::period_algebra::unit_character_negative;
    use proptest::prelude::*;

    type Q = Rational;

    fn s(a: Q, b: Q, c: Q) -> WallSurface {
        WallSurface::Slit(SlitDegenerateSurface { l: [a, b, c], marking: Marking::BlackFirst })
    }

    fn ex_triple() -> [LatticeElement; 3] {
        [LatticeElement::new(1, 0), LatticeElement::new(0, 1), LatticeElement::new(-1, -1)]
    }

    #[test]
    fn core_types() {
        let torus = TorusSurface::new(Cx::from_ints(1, 0), Cx::from_ints(0, 1), Cx::real(rat(1, 2)))
            .unwrap();
        assert_eq!(core_type(&Surface::Torus(torus)), Ok(CoreType::TorusType));
        let cyl = CylinderSurface::<Q>::new(Cx::from_ints(1, 0), Cx::from_ints(0, 1), Cx::from_ints(0, -1))
            .unwrap();
        assert_eq!(core_type(&Surface::Cylinder(cyl)), Ok(CoreType::CylinderType));
        let hex = HexagonSurface::from_lattice(
            &unit_character_negative(),
            ex_triple(),
            Cx::new(rat(1, 5), rat(1, 5)),
        )
        .unwrap();
        assert_eq!(core_type(&Surface::Hexagon(hex)), Ok(CoreType::DegenerateType));
    }

    #[test]
    fn slits_that_wrap_are_rejected() {
        let mk = |a: Cx<Q>| TorusSurface::new(Cx::from_ints(1, 0), Cx::from_ints(0, 1), a);
        assert!(mk(Cx::from_ints(1, 0)).is_err());
        assert!(mk(Cx::new(rat(3, 2), rat(3, 2))).is_err());
        assert!(mk(Cx::new(rat(1, 2), rat(1, 2))).is_ok());
        assert!(mk(Cx::new(rat(3, 2), rat(1, 1))).is_ok());
        assert!(mk(Cx::from_ints(3, 2)).is_err());
        assert!(mk(Cx::new(rat(3, 4), rat(1, 2))).is_ok());
        assert!(mk(Cx::zero()).is_err());
    }

    #[test]
    fn volume_constraints() {
        let torus = Surface::Torus(
            TorusSurface::<Q>::new(Cx::from_ints(1, 0), Cx::from_ints(0, 1), Cx::real(rat(1, 2))).unwrap(),
        );
        let pos = PeriodCharacter::gaussian((1, 0), (0, 1)).unwrap();
        assert!(volume_constraint_check(&torus, &pos));
        assert!(!volume_constraint_check(&torus, &unit_character_negative()));
        let slit = Surface::<Q>::Slit(SlitDegenerateSurface::new(int(1), int(1), int(1)).unwrap());
        assert!(volume_constraint_check(&slit, &PeriodCharacter::gaussian((1, 0), (0, 0)).unwrap()));
        assert!(TorusSurface::realizing(&unit_character_negative(), Cx::real(rat(1, 2))).is_err());
    }

    #[test]
    fn boundary_forms_of_arithmetic_cylinders() {
        assert_eq!(
            cylinder_boundary_surface(1, 0, Sign::Plus, &rat(3, 2)),
            Ok(s(rat(1, 2), rat(1, 2), rat(3, 2)))
        );
        assert_eq!(
            cylinder_boundary_surface(2, 1, Sign::Plus, &rat(-1, 2)),
            Ok(s(rat(1, 2), rat(1, 2), rat(3, 2)))
        );
        assert_eq!(cylinder_boundary_surface(1, 0, Sign::Plus, &int(0)), Ok(WallSurface::PinchedTorus));
        assert_eq!(cylinder_boundary_surface(2, 1, Sign::Plus, &int(0)), Ok(WallSurface::PointInH2m2));
        assert_eq!(cylinder_boundary_surface(2, 1, Sign::Plus, &int(3)), Ok(WallSurface::PointInH2m2));
        assert_eq!(cylinder_boundary_surface(2, 1, Sign::Plus, &int(-3)), Ok(WallSurface::PointInH2m2));
        // 0 < t < l
        assert_eq!(
            cylinder_boundary_surface(3, 2, Sign::Plus, &int(1)),
            Ok(s(int(2), int(1), int(1)))
        );
        // −(n+1)k+l < t < −nk+l with n = 1
        assert_eq!(
            cylinder_boundary_surface(2, 1, Sign::Plus, &rat(-3, 2)),
            Ok(s(rat(3, 2), rat(3, 2), rat(1, 2)))
        );
        // nk+l < t < (n+1)k+l with n = 1
        assert_eq!(
            cylinder_boundary_surface(2, 1, Sign::Plus, &rat(7, 2)),
            Ok(s(rat(1, 2), rat(3, 2), rat(7, 2)))
        );
        assert!(matches!(
            cylinder_boundary_point(1, 0, Sign::Plus, &Cx::from_ints(1, 1)),
            Err(SurfaceError::NotOnBoundary)
        ));
        assert!(cylinder_boundary_surface(4, 2, Sign::Plus, &int(1)).is_err());
    }

    #[test]
    fn hexagon_sides_border_their_cylinders() {
        let chi = unit_character_negative();
        let half = rat(1, 2);
        let want = [LatticeElement::new(1, 0), LatticeElement::new(0, 1), LatticeElement::new(-1, -1)];
        for side in 1..=3 {
            let b = hexagon_boundary_surface(&chi, ex_triple(), side, &half).unwrap();
            assert_eq!(b.borders, want[side - 1]);
            // the point lies on the boundary line of CC_{u_i}: Im(ū z) = Vol
            let u = chi.value(b.borders);
            assert_eq!(cross(&u, &b.cylinder_point), volume(&chi));
        }
        assert_eq!(chi.value(want[1]), Cx::from_ints(0, -1));
        assert_eq!(chi.value(want[2]), Cx::from_ints(-1, 1));
        assert_eq!(
            hexagon_boundary_surface(&chi, ex_triple(), 4, &half),
            Err(SurfaceError::BadSideIndex(4))
        );
    }

    fn rational_in(lo: i64, hi: i64) -> impl Strategy<Value = Q> {
        (lo * 64..hi * 64).prop_map(|n| rat(n, 64))
    }

    proptest! {
        #[test]
        fn hexagon_gauss_bonnet(x in 1i64..63, y in 1i64..63) {
            prop_assume!(x + y < 64);
            let hex = HexagonSurface::from_lattice(
                &unit_character_negative(),
                ex_triple(),
                Cx::new(rat(x, 64), rat(y, 64)),
            ).unwrap();
            let a = hex.sector_angles();
            let pi = std::f64::consts::PI;
            for t in a {
                prop_assert!(t >= pi - 1e-12 && t <= 2.0 * pi + 1e-12);
            }
            prop_assert!((a[0] + a[2] + a[4] - 4.0 * pi).abs() < 1e-9);
            prop_assert!((a[1] + a[3] + a[5] - 4.0 * pi).abs() < 1e-9);
            prop_assert_eq!(hex.black_triangle_area(), -volume(&unit_character_negative()) / int(2));
        }

        #[test]
        fn cylinder_membership_three_ways(re in rational_in(-4, 4), im in rational_in(-4, 4), vsel in 0usize..3) {
            let u = Cx::<Q>::from_ints(1, 0);
            let v = [Cx::from_ints(0, 1), Cx::from_ints(0, -1), Cx::from_ints(0, 0)][vsel].clone();
            let z = Cx::new(re, im);
            let s = CylinderSurface { u: u.clone(), v: v.clone(), z: z.clone() };
            let (p, q) = s.parallelograms_positive();
            let vol = cross(&u, &v);
            let m = if vol.is_neg() { vol } else { int(0) };
            let direct = cross(&u, &z) < m;
            prop_assert_eq!(s.is_valid(), p && q);
            prop_assert_eq!(s.is_valid(), direct);
        }

        #[test]
        fn minus_chamber_is_the_mirror(kl in 0usize..6, t in rational_in(-12, 12)) {
            let (k, l) = [(1, 0), (2, 1), (3, 1), (3, 2), (5, 2), (7, 4)][kl];
            let a = cylinder_boundary_surface(k, l, Sign::Minus, &t).unwrap();
            let b = cylinder_boundary_surface(k, l, Sign::Plus, &-t.clone()).unwrap();
            match (a, b) {
                (WallSurface::Slit(x), WallSurface::Slit(y)) => {
                    prop_assert_eq!(&x.l, &y.l);
                    prop_assert_eq!(x.marking, y.marking.swapped());
                }
                (x, y) => prop_assert_eq!(x, y),
            }
        }

        #[test]
        fn boundary_slits_have_positive_lengths(kl in 0usize..6, t in rational_in(-12, 12)) {
            let (k, l) = [(1, 0), (2, 1), (3, 1), (3, 2), (5, 2), (7, 4)][kl];
            if let WallSurface::Slit(s) = cylinder_boundary_surface(k, l, Sign::Plus, &t).unwrap() {
                prop_assert!(s.l.iter().all(|x| x.is_positive()));
            }
        }
    }
}
