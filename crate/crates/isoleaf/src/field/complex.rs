use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::ExactField;

/// Exact complex number `re + i·im` over an exact real field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: ExactField> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }

    pub fn real(re: R) -> Self {
        Cx { re, im: R::zero() }
    }

    pub fn zero() -> Self {
        Cx::real(R::zero())
    }

    pub fn i() -> Self {
        Cx::new(R::zero(), R::one())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Cx::new(R::from_int(re), R::from_int(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, s: &R) -> Self {
        Cx::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }

    /// `|z|²`
    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// Exact quotient; panics on division by zero.
    pub fn div(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        assert!(!n.is_zero(), "division by zero");
        let p = self.clone() * o.conj();
        Cx::new(p.re / n.clone(), p.im / n)
    }

    /// `i·z`, a quarter turn.
    pub fn mul_i(&self) -> Self {
        Cx::new(-self.im.clone(), self.re.clone())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// `Im(conj(a)·b)`, the signed area spanned by `a` and `b`.
pub fn cross<R: ExactField>(a: &Cx<R>, b: &Cx<R>) -> R {
    a.re.clone() * b.im.clone() - a.im.clone() * b.re.clone()
}

/// `Re(conj(a)·b)`
pub fn dot<R: ExactField>(a: &Cx<R>, b: &Cx<R>) -> R {
    a.re.clone() * b.re.clone() + a.im.clone() * b.im.clone()
}

impl<R: ExactField> Add for Cx<R> {
    type Output = Cx<R>;
    fn add(self, o: Cx<R>) -> Cx<R> {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}

impl<R: ExactField> Sub for Cx<R> {
    type Output = Cx<R>;
    fn sub(self, o: Cx<R>) -> Cx<R> {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}

impl<R: ExactField> Mul for Cx<R> {
    type Output = Cx<R>;
    fn mul(self, o: Cx<R>) -> Cx<R> {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Cx::new(re, im)
    }
}

impl<R: ExactField> Neg for Cx<R> {
    type Output = Cx<R>;
    fn neg(self) -> Cx<R> {
        Cx::new(-self.re, -self.im)
    }
}

impl<R: fmt::Debug> fmt::Debug for Cx<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Rational};

    type G = Cx<Rational>;

    #[test]
    fn volume_example() {
        // Im((2−i)(1+3i)) = 5
        let g1 = G::from_ints(2, 1);
        let g2 = G::from_ints(1, 3);
        assert_eq!(cross(&g1, &g2), int(5));
    }

    #[test]
    fn division_round_trip() {
        let a = G::from_ints(3, -2);
        let b = G::from_ints(1, 4);
        assert_eq!(a.div(&b) * b, a);
    }
}
