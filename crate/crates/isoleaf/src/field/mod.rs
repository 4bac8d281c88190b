//! Exact scalar fields used by the combinatorial layer.
//!
//! Everything that decides chamber membership or wall incidence runs over an
//! [`ExactField`]: either [`Rational`] or a real quadratic field [`QuadReal`].

mod complex;
mod matrix;
mod quad;

pub use complex::{cross as complex_cross, dot as complex_dot, Cx};
pub use matrix::Mat2;
pub use quad::QuadReal;

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// An ordered field with exact arithmetic and decidable sign.
pub trait ExactField:
    Clone
    + Debug
    + Eq
    + std::hash::Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_int(n: i64) -> Self;
    fn from_rational(q: Rational) -> Self;
    /// Sign compared with zero.
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;
    /// `Some(q)` when the value lies in ℚ.
    fn as_rational(&self) -> Option<Rational>;
    /// Exact text form, inverse of [`ExactField::decode`].
    fn encode(&self) -> String;
    fn decode(s: &str) -> Option<Self>;

    fn cmp_exact(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }

    fn is_pos(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_neg(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn abs_exact(&self) -> Self {
        if self.is_neg() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding the value.
    fn floor_int(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut n = if approx.is_finite() {
            BigInt::from(approx as i64)
        } else {
            BigInt::zero()
        };
        loop {
            let nf = Self::from_rational(Rational::from_integer(n.clone()));
            if nf.cmp_exact(self) == Ordering::Greater {
                n -= 1;
                continue;
            }
            let n1 = Self::from_rational(Rational::from_integer(n.clone() + 1));
            if n1.cmp_exact(self) != Ordering::Greater {
                n += 1;
                continue;
            }
            return n;
        }
    }
}

impl ExactField for Rational {
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if Signed::is_positive(self) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn floor_int(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    fn encode(&self) -> String {
        rational_text(self)
    }

    fn decode(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub fn rational_pair(q: &Rational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn rational_from_pair(p: &[String; 2]) -> Option<Rational> {
    let n: BigInt = p[0].parse().ok()?;
    let d: BigInt = p[1].parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Rational number as `p` or `p/q`.
pub fn rational_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_of_rationals() {
        assert_eq!(rat(7, 2).floor_int(), BigInt::from(3));
        assert_eq!(rat(-7, 2).floor_int(), BigInt::from(-4));
        assert_eq!(int(-3).floor_int(), BigInt::from(-3));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("12"), Some(int(12)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rational_text(&rat(4, -6)), "-2/3");
    }

    #[test]
    fn square_free() {
        assert!(is_square_free(2));
        assert!(is_square_free(30));
        assert!(!is_square_free(12));
        assert!(!is_square_free(1));
    }
}
