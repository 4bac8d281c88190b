use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ExactField, Rational};

/// A real number `a + b·√d` with rational `a`, `b` and square-free `d ≥ 2`.
///
/// Values with `b = 0` carry `d = 0` and combine with any radicand.
/// Mixing two different radicands panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadReal {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadReal {
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() {
            QuadReal { a, b, d: 0 }
        } else {
            assert!(d >= 2, "radicand must be at least 2");
            QuadReal { a, b, d }
        }
    }

    pub fn rational(a: Rational) -> Self {
        QuadReal::new(a, Rational::zero(), 0)
    }

    /// `√d`
    pub fn sqrt(d: u64) -> Self {
        QuadReal::new(Rational::zero(), Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Radicand, 0 when the value is rational.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    fn join(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("mixed radicands {x} and {y}"),
        }
    }

    pub fn conj(&self) -> Self {
        QuadReal::new(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        let d = Rational::from_integer(self.d.into());
        self.a.clone() * self.a.clone() - d * self.b.clone() * self.b.clone()
    }
}

impl fmt::Debug for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", super::rational_text(&self.a))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                super::rational_text(&self.a),
                super::rational_text(&self.b),
                self.d
            )
        }
    }
}

impl std::str::FromStr for QuadReal {
    type Err = ();

    /// Accepts `p/q` or `a + b*sqrt(d)`.
    fn from_str(s: &str) -> Result<Self, ()> {
        let s = s.trim();
        let Some(body) = s.strip_suffix(')') else {
            return super::parse_rational(s).map(QuadReal::rational).ok_or(());
        };
        let (ab, d) = body.rsplit_once("*sqrt(").ok_or(())?;
        let d: u64 = d.trim().parse().map_err(|_| ())?;
        let (a, b) = ab.split_once(" + ").ok_or(())?;
        let a = super::parse_rational(a).ok_or(())?;
        let b = super::parse_rational(b).ok_or(())?;
        if d < 2 || b.is_zero() {
            return Err(());
        }
        Ok(QuadReal::new(a, b, d))
    }
}

impl Add for QuadReal {
    type Output = QuadReal;
    fn add(self, o: QuadReal) -> QuadReal {
        let d = self.join(&o);
        QuadReal::new(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for QuadReal {
    type Output = QuadReal;
    fn sub(self, o: QuadReal) -> QuadReal {
        let d = self.join(&o);
        QuadReal::new(self.a - o.a, self.b - o.b, d)
    }
}

impl Mul for QuadReal {
    type Output = QuadReal;
    fn mul(self, o: QuadReal) -> QuadReal {
        let d = self.join(&o);
        let dr = Rational::from_integer(d.into());
        let a = self.a.clone() * o.a.clone() + dr * self.b.clone() * o.b.clone();
        let b = self.a * o.b + self.b * o.a;
        QuadReal::new(a, b, d)
    }
}

impl Div for QuadReal {
    type Output = QuadReal;
    fn div(self, o: QuadReal) -> QuadReal {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero");
        let num = self * o.conj();
        QuadReal::new(num.a / n.clone(), num.b / n, num.d)
    }
}

impl Neg for QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal::new(-self.a, -self.b, self.d)
    }
}

impl Zero for QuadReal {
    fn zero() -> Self {
        QuadReal::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadReal {
    fn one() -> Self {
        QuadReal::rational(Rational::one())
    }
}

impl ExactField for QuadReal {
    fn from_int(n: i64) -> Self {
        QuadReal::rational(Rational::from_integer(n.into()))
    }

    fn from_rational(q: Rational) -> Self {
        QuadReal::rational(q)
    }

    fn sign(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = self.a.clone() * self.a.clone();
        let b2d = self.b.clone() * self.b.clone() * Rational::from_integer(self.d.into());
        // d is square-free, so a² = d·b² is impossible with b ≠ 0
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}
