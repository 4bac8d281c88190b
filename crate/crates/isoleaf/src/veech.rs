//! Veech groups of isoperiodic leaves and the unit-group criterion for
//! quadratic period fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{is_square_free, ExactField, Mat2, QuadReal, Rational};
use crate::period_algebra::{classify, normalizing_matrix, AnyCharacter, LeafKind, PeriodError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VeechError {
    #[error("{0} is not a square-free integer ≥ 2")]
    NotSquareFree(u64),
    #[error("gcd(t, l, m) ≠ 1 or t·m = 0 for ({t},{l},{m})")]
    BadTriple { t: i64, l: i64, m: i64 },
    #[error("trivial character")]
    TrivialCharacter,
    #[error("no unit found within {0} continued-fraction steps")]
    UnitSearchExhausted(usize),
}

/// The ring `ℤ[γ]` of integers of `ℚ(√D)`, `γ = √D` or `(1+√D)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadRing {
    pub d: u64,
}

/// `α + βγ`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub alpha: BigInt,
    pub beta: BigInt,
}

impl RingElement {
    pub fn new(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Self {
        RingElement { alpha: alpha.into(), beta: beta.into() }
    }
}

impl QuadRing {
    pub fn new(d: u64) -> Result<Self, VeechError> {
        if d < 2 || !is_square_free(d) {
            return Err(VeechError::NotSquareFree(d));
        }
        Ok(QuadRing { d })
    }

    fn half_integral(&self) -> bool {
        self.d % 4 == 1
    }

    /// `(γ + γ̄, γ·γ̄)`
    pub fn trace_norm_of_gamma(&self) -> (BigInt, BigInt) {
        let d = BigInt::from(self.d);
        if self.half_integral() {
            (BigInt::one(), (BigInt::one() - d) / 4)
        } else {
            (BigInt::zero(), -d)
        }
    }

    pub fn gamma(&self) -> QuadReal {
        if self.half_integral() {
            let h = Rational::new(1.into(), 2.into());
            QuadReal::new(h.clone(), h, self.d)
        } else {
            QuadReal::sqrt(self.d)
        }
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        // γ² = tr·γ − n
        let (tr, n) = self.trace_norm_of_gamma();
        let bb = &x.beta * &y.beta;
        RingElement {
            alpha: &x.alpha * &y.alpha - &bb * &n,
            beta: &x.alpha * &y.beta + &x.beta * &y.alpha + &bb * &tr,
        }
    }

    pub fn pow(&self, x: &RingElement, k: u64) -> RingElement {
        let mut out = RingElement::new(1, 0);
        let mut base = x.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        out
    }

    pub fn norm(&self, x: &RingElement) -> BigInt {
        let (tr, n) = self.trace_norm_of_gamma();
        &x.alpha * &x.alpha + &x.alpha * &x.beta * &tr + &x.beta * &x.beta * &n
    }

    pub fn to_real(&self, x: &RingElement) -> QuadReal {
        let q = |v: &BigInt| QuadReal::from_rational(Rational::from_integer(v.clone()));
        q(&x.alpha) + q(&x.beta) * self.gamma()
    }

    /// `Some(x)` when `v ∈ ℤ[γ]`.
    pub fn from_real(&self, v: &QuadReal) -> Option<RingElement> {
        // v = a + b√D; for γ = (1+√D)/2, √D = 2γ − 1
        let (a, b) = if v.radicand() == 0 || v.radicand() == self.d {
            (v.a().clone(), v.b().clone())
        } else {
            return None;
        };
        let (alpha, beta) = if self.half_integral() { (a - b.clone(), b * BigInt::from(2)) } else { (a, b) };
        (alpha.is_integer() && beta.is_integer()).then(|| RingElement::new(alpha.to_integer(), beta.to_integer()))
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest unit `> 1` of `ℤ[γ]`, from the continued fraction of `−γ̄`.
pub fn fundamental_unit(d: u64) -> Result<RingElement, VeechError> {
    let ring = QuadRing::new(d)?;
    let s = isqrt(d) as i128;
    let di = d as i128;
    // −γ̄ = (P + √D)/Q
    let (mut p, mut q): (i128, i128) = if ring.half_integral() { (-1, 2) } else { (0, 1) };
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    const STEPS: usize = 100_000;
    for _ in 0..STEPS {
        let a = Integer::div_floor(&(p + s), &q);
        let h = BigInt::from(a) * &h1 + &h0;
        let k = BigInt::from(a) * &k1 + &k0;
        (h0, h1) = (h1, h.clone());
        (k0, k1) = (k1, k.clone());
        if k.is_positive() {
            let e = RingElement { alpha: h, beta: k };
            if ring.norm(&e).abs().is_one() {
                return Ok(e);
            }
        }
        p = a * q - p;
        q = (di - p * p) / q;
    }
    Err(VeechError::UnitSearchExhausted(STEPS))
}

/// Scan over `β = 1..=max_beta` for the least unit `α + βγ > 1`.
pub fn fundamental_unit_brute(d: u64, max_beta: u64) -> Result<Option<RingElement>, VeechError> {
    let ring = QuadRing::new(d)?;
    let g = ring.gamma().to_f64();
    let gbar = ring.gamma().conj().to_f64();
    for beta in 1..=max_beta as i64 {
        // a unit with small conjugate has α ≈ −β·γ̄
        let centre = (-(beta as f64) * gbar).round() as i64;
        for alpha in centre - 2..=centre + 2 {
            let e = RingElement::new(alpha, beta);
            if ring.norm(&e).abs().is_one() && alpha as f64 + beta as f64 * g > 1.0 {
                return Ok(Some(e));
            }
        }
    }
    Ok(None)
}

/// Parameters `τ = (t, l, m)` of `Γ = tℤ + (l + mγ)ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupParams {
    pub t: i64,
    pub l: i64,
    pub m: i64,
}

/// Multiplication by `η` maps `Γ` onto itself with determinant one; both
/// inclusions are decided exactly.
pub fn stabilizes(ring: &QuadRing, tau: GroupParams, eta: &RingElement) -> bool {
    let basis = [RingElement::new(tau.t, 0), RingElement::new(tau.l, tau.m)];
    // coordinates of α + βγ in the basis (t, l + mγ)
    let coords = |x: &RingElement| -> Option<(BigInt, BigInt)> {
        let (m, t, l) = (BigInt::from(tau.m), BigInt::from(tau.t), BigInt::from(tau.l));
        if !(&x.beta % &m).is_zero() {
            return None;
        }
        let y = &x.beta / &m;
        let rest = &x.alpha - &y * &l;
        if !(&rest % &t).is_zero() {
            return None;
        }
        Some((rest / t, y))
    };
    let mut cols = Vec::new();
    for b in &basis {
        match coords(&ring.mul(eta, b)) {
            Some(c) => cols.push(c),
            None => return false,
        }
    }
    let det = &cols[0].0 * &cols[1].1 - &cols[1].0 * &cols[0].1;
    det.is_one()
}

/// The unit group `G_{D,τ}`: generated by `ε^k`, or trivial with the cycle
/// of residues of `ε` modulo `M = |t·m·N(l+mγ)|` as certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadGroup {
    Exponent { k: u64, generator: RingElement },
    Trivial { modulus: BigInt, residues: Vec<RingElement> },
}

/// Conditions on `η = α + βγ` with `N(η) = 1`, from residues mod `M`.
fn divisibility(ring: &QuadRing, tau: GroupParams, beta: &BigInt) -> bool {
    let m = BigInt::from(tau.m);
    if !(beta % &m).is_zero() {
        return false;
    }
    let n = ring.norm(&RingElement::new(tau.l, tau.m));
    ((beta / &m) * n % BigInt::from(tau.t)).is_zero()
}

pub fn quadratic_group(d: u64, tau: GroupParams) -> Result<QuadGroup, VeechError> {
    let ring = QuadRing::new(d)?;
    let GroupParams { t, l, m } = tau;
    if t == 0 || m == 0 || t.gcd(&l).gcd(&m) != 1 {
        return Err(VeechError::BadTriple { t, l, m });
    }
    let eps = fundamental_unit(d)?;
    let eps_norm = ring.norm(&eps);
    let big_m = (BigInt::from(t) * BigInt::from(m) * ring.norm(&RingElement::new(l, m))).abs();
    let reduce = |x: RingElement| RingElement { alpha: x.alpha.mod_floor(&big_m), beta: x.beta.mod_floor(&big_m) };
    let one = reduce(RingElement::new(1, 0));
    let mut cur = one.clone();
    let mut residues = Vec::new();
    let mut k = 0u64;
    loop {
        k += 1;
        cur = reduce(ring.mul(&cur, &eps));
        residues.push(cur.clone());
        let norm_one = eps_norm.is_one() || k % 2 == 0;
        if norm_one && divisibility(&ring, tau, &cur.beta) {
            return Ok(QuadGroup::Exponent { k, generator: ring.pow(&eps, k) });
        }
        if cur == one && (eps_norm.is_one() || k % 2 == 0) {
            return Ok(QuadGroup::Trivial { modulus: big_m, residues });
        }
    }
}

/// Veech group of a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VeechDescriptor {
    /// `C⁻¹·SL(2,ℤ)·C` with `C` the normalizing matrix.
    ConjSL2Z { conjugator: Mat2<Rational> },
    /// `±[[1, b], [0, a]]`, `a > 0`.
    TriangularV,
    /// `±[[u, b], [0, a]]`, `a > 0`, `u ∈ ⟨ε^k⟩`.
    QuadraticV { d: u64, tau: GroupParams, generator: RingElement, k: u64 },
}

impl VeechDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            VeechDescriptor::ConjSL2Z { .. } => "ConjSL2Z",
            VeechDescriptor::TriangularV => "TriangularV",
            VeechDescriptor::QuadraticV { .. } => "QuadraticV",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            VeechDescriptor::ConjSL2Z { conjugator: c } => json!({
                "type": "ConjSL2Z",
                "conjugator": [[c.a.encode(), c.b.encode()], [c.c.encode(), c.d.encode()]],
            }),
            VeechDescriptor::TriangularV => json!({
                "type": "TriangularV",
                "group": "±[[1,b],[0,a]], a>0",
            }),
            VeechDescriptor::QuadraticV { d, tau, generator, k } => {
                let ring = QuadRing { d: *d };
                json!({
                    "type": "QuadraticV",
                    "D": d.to_string(),
                    "tau": [tau.t.to_string(), tau.l.to_string(), tau.m.to_string()],
                    "generator": {
                        "alpha": generator.alpha.to_string(),
                        "beta": generator.beta.to_string(),
                        "value": ring.to_real(generator).encode(),
                    },
                    "k": k.to_string(),
                })
            }
        }
    }

    /// Membership of a real matrix in the group.
    pub fn contains(&self, mat: &Mat2<QuadReal>) -> bool {
        if let VeechDescriptor::ConjSL2Z { conjugator } = self {
            let lift = |q: &Rational| QuadReal::from_rational(q.clone());
            let c = Mat2::new(lift(&conjugator.a), lift(&conjugator.b), lift(&conjugator.c), lift(&conjugator.d));
            let Some(ci) = c.inverse() else { return false };
            let m = c * mat.clone() * ci;
            let integral = m.entries().iter().all(|e| e.as_rational().is_some_and(|q| q.is_integer()));
            return integral && m.det() == QuadReal::one();
        }
        if !mat.c.is_zero() || mat.d.is_zero() {
            return false;
        }
        // ±[[u, b], [0, a]] with a > 0
        let u = if mat.d.is_pos() { mat.a.clone() } else { -mat.a.clone() };
        match self {
            VeechDescriptor::TriangularV => u == QuadReal::one(),
            VeechDescriptor::QuadraticV { d, tau, .. } => {
                let ring = QuadRing { d: *d };
                u.is_pos() && ring.from_real(&u).is_some_and(|e| stabilizes(&ring, *tau, &e))
            }
            VeechDescriptor::ConjSL2Z { .. } => unreachable!(),
        }
    }

    pub fn contains_rational(&self, mat: &Mat2<Rational>) -> bool {
        let lift = |q: &Rational| QuadReal::from_rational(q.clone());
        self.contains(&Mat2::new(lift(&mat.a), lift(&mat.b), lift(&mat.c), lift(&mat.d)))
    }
}

/// `θ = r + sγ` scaled to `τ = (t, l, m)` with `gcd = 1`, `0 ≤ l < |t|`, `m > 0`.
pub fn params_of_theta(ring: &QuadRing, theta: &QuadReal) -> Result<GroupParams, VeechError> {
    let (a, b) = (theta.a().clone(), theta.b().clone());
    let (r, s) = if ring.half_integral() { (a - b.clone(), b * BigInt::from(2)) } else { (a, b) };
    let lcm = r.denom().lcm(s.denom());
    let to_i64 = |q: Rational| -> i64 { i64::try_from(q.to_integer()).expect("small parameters") };
    let lq = Rational::from_integer(lcm.clone());
    let mut t = to_i64(lq.clone());
    let mut l = to_i64(r * lq.clone());
    let mut m = to_i64(s * lq);
    let g = t.gcd(&l).gcd(&m);
    (t, l, m) = (t / g, l / g, m / g);
    if m < 0 {
        (l, m) = (-l, -m);
    }
    t = t.abs();
    l = l.mod_floor(&t);
    Ok(GroupParams { t, l, m })
}

pub fn veech_group(chi: &AnyCharacter) -> Result<VeechDescriptor, VeechError> {
    let trivial = |_: PeriodError| VeechError::TrivialCharacter;
    match chi {
        AnyCharacter::Gaussian(c) | AnyCharacter::Rational(c) => match classify(c).map_err(trivial)? {
            LeafKind::Positive | LeafKind::Negative => {
                Ok(VeechDescriptor::ConjSL2Z { conjugator: normalizing_matrix(c).expect("nonzero volume") })
            }
            _ => Ok(VeechDescriptor::TriangularV),
        },
        AnyCharacter::Quadratic { d, chi } => match classify(chi).map_err(trivial)? {
            LeafKind::NonArithReal { theta } => {
                let ring = QuadRing::new(*d)?;
                let tau = params_of_theta(&ring, &theta)?;
                match quadratic_group(*d, tau)? {
                    QuadGroup::Exponent { k, generator } => Ok(VeechDescriptor::QuadraticV { d: *d, tau, generator, k }),
                    QuadGroup::Trivial { .. } => Ok(VeechDescriptor::TriangularV),
                }
            }
            _ => Ok(VeechDescriptor::TriangularV),
        },
    }
}
