//! Period characters, leaf classification and characteristic triples.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{
    self, is_square_free, rational_from_pair, rational_pair, Cx, ExactField, Mat2, QuadReal,
    Rational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodError {
    #[error("trivial period character")]
    TrivialCharacter,
    #[error("zero lattice element")]
    ZeroElement,
    #[error("expected a {expected} leaf, found {found}")]
    WrongLeafKind { expected: &'static str, found: &'static str },
    #[error("matrix is not symplectic (det = {0})")]
    NotSymplectic(i64),
    #[error("coordinate does not belong to the {0} field")]
    FieldMismatch(&'static str),
    #[error("radicand {0} is not square-free")]
    NotSquareFree(u64),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// `χ(α) = g1`, `χ(β) = g2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodCharacter<R> {
    g1: Cx<R>,
    g2: Cx<R>,
}

impl<R: ExactField> PeriodCharacter<R> {
    pub fn new(g1: Cx<R>, g2: Cx<R>) -> Result<Self, PeriodError> {
        if g1.is_zero() && g2.is_zero() {
            return Err(PeriodError::TrivialCharacter);
        }
        Ok(PeriodCharacter { g1, g2 })
    }

    pub fn g1(&self) -> &Cx<R> {
        &self.g1
    }

    pub fn g2(&self) -> &Cx<R> {
        &self.g2
    }

    pub fn value(&self, u: LatticeElement) -> Cx<R> {
        self.g1.scale(&R::from_int(u.m)) + self.g2.scale(&R::from_int(u.n))
    }

    /// Multiplies both periods by `lambda`.
    pub fn scaled(&self, lambda: &Cx<R>) -> Result<Self, PeriodError> {
        PeriodCharacter::new(self.g1.clone() * lambda.clone(), self.g2.clone() * lambda.clone())
    }
}

impl PeriodCharacter<Rational> {
    pub fn gaussian(g1: (i64, i64), g2: (i64, i64)) -> Result<Self, PeriodError> {
        PeriodCharacter::new(Cx::from_ints(g1.0, g1.1), Cx::from_ints(g2.0, g2.1))
    }
}

/// `Im(conj(g1)·g2)`
pub fn volume<R: ExactField>(chi: &PeriodCharacter<R>) -> R {
    field::complex_cross(&chi.g1, &chi.g2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeafKind<R> {
    Positive,
    Negative,
    /// `Γ = ℤ·a`, with `a` normalized to have positive real part (or positive
    /// imaginary part when purely imaginary).
    ArithReal { a: Cx<R> },
    /// `Γ = g1·(ℤ + θℤ)` with `θ ∈ (0,1)` irrational.
    NonArithReal { theta: R },
}

impl<R> LeafKind<R> {
    pub fn name(&self) -> &'static str {
        match self {
            LeafKind::Positive => "Positive",
            LeafKind::Negative => "Negative",
            LeafKind::ArithReal { .. } => "ArithReal",
            LeafKind::NonArithReal { .. } => "NonArithReal",
        }
    }
}

pub fn classify<R: ExactField>(chi: &PeriodCharacter<R>) -> Result<LeafKind<R>, PeriodError> {
    if chi.g1.is_zero() && chi.g2.is_zero() {
        return Err(PeriodError::TrivialCharacter);
    }
    let vol = volume(chi);
    if vol.is_pos() {
        return Ok(LeafKind::Positive);
    }
    if vol.is_neg() {
        return Ok(LeafKind::Negative);
    }
    if chi.g1.is_zero() {
        return Ok(LeafKind::ArithReal { a: orient(chi.g2.clone()) });
    }
    let r = chi.g2.div(&chi.g1).re;
    match r.as_rational() {
        Some(q) => {
            let m = R::from_rational(Rational::from_integer(q.denom().clone()));
            let a = Cx::new(chi.g1.re.clone() / m.clone(), chi.g1.im.clone() / m);
            Ok(LeafKind::ArithReal { a: orient(a) })
        }
        None => {
            let fl = R::from_rational(Rational::from_integer(r.floor_int()));
            Ok(LeafKind::NonArithReal { theta: r - fl })
        }
    }
}

fn orient<R: ExactField>(a: Cx<R>) -> Cx<R> {
    if a.re.is_neg() || (a.re.is_zero() && a.im.is_neg()) {
        -a
    } else {
        a
    }
}

/// Real-linear map sending `(g1, g2)` to `(1, i)` (positive) or `(1, −i)`
/// (negative). `None` for real leaves.
pub fn normalizing_matrix<R: ExactField>(chi: &PeriodCharacter<R>) -> Option<Mat2<R>> {
    let b = Mat2::from_columns(&chi.g1, &chi.g2);
    let vol = volume(chi);
    let inv = b.inverse()?;
    if vol.is_pos() {
        Some(inv)
    } else {
        let flip = Mat2::from_ints(1, 0, 0, -1);
        Some(flip * inv)
    }
}

/// `m·g1 + n·g2`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeElement {
    pub m: i64,
    pub n: i64,
}

impl LatticeElement {
    pub const fn new(m: i64, n: i64) -> Self {
        LatticeElement { m, n }
    }

    pub fn is_zero(self) -> bool {
        self.m == 0 && self.n == 0
    }

    pub fn max_norm(self) -> i64 {
        self.m.abs().max(self.n.abs())
    }

    /// Integer determinant `m·n' − n·m'`; `Im(ū·u') = det·Vol`.
    pub fn det(self, o: LatticeElement) -> i64 {
        self.m * o.n - self.n * o.m
    }
}

impl std::ops::Add for LatticeElement {
    type Output = LatticeElement;
    fn add(self, o: Self) -> Self {
        LatticeElement::new(self.m + o.m, self.n + o.n)
    }
}

impl std::ops::Sub for LatticeElement {
    type Output = LatticeElement;
    fn sub(self, o: Self) -> Self {
        LatticeElement::new(self.m - o.m, self.n - o.n)
    }
}

impl std::ops::Neg for LatticeElement {
    type Output = LatticeElement;
    fn neg(self) -> Self {
        LatticeElement::new(-self.m, -self.n)
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

pub fn is_primitive(u: LatticeElement) -> Result<bool, PeriodError> {
    if u.is_zero() {
        return Err(PeriodError::ZeroElement);
    }
    Ok(u.m.gcd(&u.n) == 1)
}

/// Primitive elements of max-norm at most `bound`, sorted by (max-norm, m, n).
pub fn primitive_elements(bound: i64) -> Vec<LatticeElement> {
    let mut out = Vec::new();
    for m in -bound..=bound {
        for n in -bound..=bound {
            let u = LatticeElement::new(m, n);
            if !u.is_zero() && m.gcd(&n) == 1 {
                out.push(u);
            }
        }
    }
    out.sort_by_key(|u| (u.max_norm(), u.m, u.n));
    out
}

/// `(u1, u2, u3)` up to cyclic rotation, stored in its lexicographically
/// least rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacteristicTriple([LatticeElement; 3]);

impl CharacteristicTriple {
    pub fn new(u1: LatticeElement, u2: LatticeElement, u3: LatticeElement) -> Self {
        let rots = [[u1, u2, u3], [u2, u3, u1], [u3, u1, u2]];
        CharacteristicTriple(*rots.iter().min().unwrap())
    }

    pub fn elements(&self) -> [LatticeElement; 3] {
        self.0
    }

    /// `u_i` with `i` taken mod 3, zero-based.
    pub fn u(&self, i: usize) -> LatticeElement {
        self.0[i % 3]
    }

    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|u| u.max_norm()).max().unwrap()
    }

    /// Both triple invariants in lattice coordinates: zero sum and unit
    /// determinant of consecutive pairs.
    pub fn is_valid(&self) -> bool {
        let [a, b, c] = self.0;
        (a + b + c).is_zero() && a.det(b) == 1 && b.det(c) == 1 && c.det(a) == 1
    }

    pub fn negated(&self) -> Self {
        let [a, b, c] = self.0;
        CharacteristicTriple::new(-a, -b, -c)
    }
}

impl fmt::Display for CharacteristicTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.0[0], self.0[1], self.0[2])
    }
}

/// Exact check of `Im(ū_i·u_{i+1}) = Vol` and `Σ u_i = 0` on values.
pub fn triple_invariants_hold<R: ExactField>(
    chi: &PeriodCharacter<R>,
    t: &CharacteristicTriple,
) -> bool {
    let vol = volume(chi);
    let v: Vec<Cx<R>> = t.elements().iter().map(|&u| chi.value(u)).collect();
    let sum = v[0].clone() + v[1].clone() + v[2].clone();
    sum.is_zero() && (0..3).all(|i| field::complex_cross(&v[i], &v[(i + 1) % 3]) == vol)
}

pub fn enumerate_triples<R: ExactField>(
    chi: &PeriodCharacter<R>,
    bound: i64,
) -> Result<Vec<CharacteristicTriple>, PeriodError> {
    let kind = classify(chi)?;
    if kind != LeafKind::Negative {
        return Err(PeriodError::WrongLeafKind { expected: "Negative", found: kind.name() });
    }
    Ok(triples_in_box(bound))
}

/// All canonical triples of max-norm at most `bound`, sorted.
pub fn triples_in_box(bound: i64) -> Vec<CharacteristicTriple> {
    let mut set = BTreeSet::new();
    for m1 in -bound..=bound {
        for n1 in -bound..=bound {
            let u1 = LatticeElement::new(m1, n1);
            if u1.is_zero() {
                continue;
            }
            for m2 in -bound..=bound {
                for n2 in -bound..=bound {
                    let u2 = LatticeElement::new(m2, n2);
                    if u1.det(u2) != 1 {
                        continue;
                    }
                    let u3 = -(u1 + u2);
                    if u3.max_norm() <= bound {
                        set.insert(CharacteristicTriple::new(u1, u2, u3));
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

pub type IntMatrix = [[i64; 2]; 2];

/// `(g1, g2)·A`
pub fn change_basis<R: ExactField>(
    chi: &PeriodCharacter<R>,
    a: IntMatrix,
) -> Result<PeriodCharacter<R>, PeriodError> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det != 1 {
        return Err(PeriodError::NotSymplectic(det));
    }
    let e = |x: i64| R::from_int(x);
    let g1 = chi.g1.scale(&e(a[0][0])) + chi.g2.scale(&e(a[1][0]));
    let g2 = chi.g1.scale(&e(a[0][1])) + chi.g2.scale(&e(a[1][1]));
    PeriodCharacter::new(g1, g2)
}

/// A character over whichever ground field it was given in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyCharacter {
    Gaussian(PeriodCharacter<Rational>),
    Quadratic { d: u64, chi: PeriodCharacter<QuadReal> },
    Rational(PeriodCharacter<Rational>),
}

/// Classification result with field-independent text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: &'static str,
    pub volume: String,
    /// Generator `a` (arithmetic) or `θ` (non-arithmetic).
    pub parameter: Option<String>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, Vol={}", self.kind, self.volume)?;
        if let Some(p) = &self.parameter {
            match self.kind {
                "ArithReal" => write!(f, ", a={p}")?,
                _ => write!(f, ", theta={p}")?,
            }
        }
        Ok(())
    }
}

fn classification<R: ExactField>(chi: &PeriodCharacter<R>) -> Classification {
    let kind = classify(chi).expect("characters are nontrivial by construction");
    let parameter = match &kind {
        LeafKind::ArithReal { a } => Some(if a.im.is_zero() {
            a.re.encode()
        } else {
            format!("{}+{}i", a.re.encode(), a.im.encode())
        }),
        LeafKind::NonArithReal { theta } => Some(theta.encode()),
        _ => None,
    };
    Classification { kind: kind.name(), volume: volume(chi).encode(), parameter }
}

impl AnyCharacter {
    pub fn classification(&self) -> Classification {
        match self {
            AnyCharacter::Gaussian(c) | AnyCharacter::Rational(c) => classification(c),
            AnyCharacter::Quadratic { chi, .. } => classification(chi),
        }
    }

    pub fn field_name(&self) -> &'static str {
        match self {
            AnyCharacter::Gaussian(_) => "gaussian",
            AnyCharacter::Quadratic { .. } => "quadratic",
            AnyCharacter::Rational(_) => "rational",
        }
    }

    /// Parses flag text: each period is `x,y` with `x`, `y` of the form
    /// `p` or `p/q`; `(re, im)` for gaussian and rational fields, `(a, b)`
    /// meaning `a + b√D` for the quadratic field.
    pub fn parse(field: &str, d: Option<u64>, g1: &str, g2: &str) -> Result<Self, PeriodError> {
        let pair = |s: &str| -> Result<(Rational, Rational), PeriodError> {
            let (x, y) = s.split_once(',').ok_or_else(|| PeriodError::Parse(s.to_string()))?;
            let px = field::parse_rational(x).ok_or_else(|| PeriodError::Parse(x.to_string()))?;
            let py = field::parse_rational(y).ok_or_else(|| PeriodError::Parse(y.to_string()))?;
            Ok((px, py))
        };
        let (a1, b1) = pair(g1)?;
        let (a2, b2) = pair(g2)?;
        match field {
            "gaussian" => Ok(AnyCharacter::Gaussian(PeriodCharacter::new(
                Cx::new(a1, b1),
                Cx::new(a2, b2),
            )?)),
            "rational" => {
                if !b1.is_zero() || !b2.is_zero() {
                    return Err(PeriodError::FieldMismatch("rational"));
                }
                Ok(AnyCharacter::Rational(PeriodCharacter::new(Cx::real(a1), Cx::real(a2))?))
            }
            "quadratic" => {
                let d = d.ok_or_else(|| PeriodError::Parse("missing D".into()))?;
                if !is_square_free(d) {
                    return Err(PeriodError::NotSquareFree(d));
                }
                let q = |a: Rational, b: Rational| Cx::real(QuadReal::new(a, b, d));
                Ok(AnyCharacter::Quadratic { d, chi: PeriodCharacter::new(q(a1, b1), q(a2, b2))? })
            }
            other => Err(PeriodError::Parse(other.to_string())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyCharacter::Gaussian(c) => json!({
                "field": "gaussian",
                "g1": [rational_pair(&c.g1.re), rational_pair(&c.g1.im)],
                "g2": [rational_pair(&c.g2.re), rational_pair(&c.g2.im)],
            }),
            AnyCharacter::Rational(c) => json!({
                "field": "rational",
                "g1": rational_pair(&c.g1.re),
                "g2": rational_pair(&c.g2.re),
            }),
            AnyCharacter::Quadratic { d, chi } => json!({
                "field": "quadratic",
                "D": d.to_string(),
                "g1": [rational_pair(chi.g1.re.a()), rational_pair(chi.g1.re.b())],
                "g2": [rational_pair(chi.g2.re.a()), rational_pair(chi.g2.re.b())],
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, PeriodError> {
        let bad = || PeriodError::Parse(v.to_string());
        let pair = |x: &Value| -> Result<Rational, PeriodError> {
            let p: [String; 2] = serde_json::from_value(x.clone()).map_err(|_| bad())?;
            rational_from_pair(&p).ok_or_else(bad)
        };
        let coords = |x: &Value| -> Result<(Rational, Rational), PeriodError> {
            let arr = x.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            Ok((pair(&arr[0])?, pair(&arr[1])?))
        };
        let field = v.get("field").and_then(Value::as_str).ok_or_else(bad)?;
        let g1 = v.get("g1").ok_or_else(bad)?;
        let g2 = v.get("g2").ok_or_else(bad)?;
        match field {
            "gaussian" => {
                let (a, b) = coords(g1)?;
                let (c, d) = coords(g2)?;
                Ok(AnyCharacter::Gaussian(PeriodCharacter::new(Cx::new(a, b), Cx::new(c, d))?))
            }
            "rational" => Ok(AnyCharacter::Rational(PeriodCharacter::new(
                Cx::real(pair(g1)?),
                Cx::real(pair(g2)?),
            )?)),
            "quadratic" => {
                let d: u64 = match v.get("D") {
                    Some(Value::String(s)) => s.parse().map_err(|_| bad())?,
                    Some(Value::Number(n)) => n.as_u64().ok_or_else(bad)?,
                    _ => return Err(bad()),
                };
                if !is_square_free(d) {
                    return Err(PeriodError::NotSquareFree(d));
                }
                let (a1, b1) = coords(g1)?;
                let (a2, b2) = coords(g2)?;
                let q = |a: Rational, b: Rational| Cx::real(QuadReal::new(a, b, d));
                Ok(AnyCharacter::Quadratic { d, chi: PeriodCharacter::new(q(a1, b1), q(a2, b2))? })
            }
            _ => Err(bad()),
        }
    }
}

/// `(1, i)`, the normalized positive character.
pub fn unit_character_positive() -> PeriodCharacter<Rational> {
    PeriodCharacter::new(Cx::real(Rational::one()), Cx::i()).unwrap()
}

/// `(1, −i)`, the normalized negative character.
pub fn unit_character_negative() -> PeriodCharacter<Rational> {
    PeriodCharacter::new(Cx::real(Rational::one()), -Cx::<Rational>::i()).unwrap()
}

/// `(1, 0)`, the normalized arithmetic character.
pub fn unit_character_arith() -> PeriodCharacter<Rational> {
    PeriodCharacter::new(Cx::real(Rational::one()), Cx::zero()).unwrap()
}
