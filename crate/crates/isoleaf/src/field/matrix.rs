use std::ops::Mul;

use super::{Cx, ExactField};

/// Real 2×2 matrix `[[a, b], [c, d]]` acting on ℂ ≅ ℝ².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<R> {
    pub a: R,
    pub b: R,
    pub c: R,
    pub d: R,
}

impl<R: ExactField> Mat2<R> {
    pub fn new(a: R, b: R, c: R, d: R) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(R::one(), R::zero(), R::zero(), R::one())
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(R::from_int(a), R::from_int(b), R::from_int(c), R::from_int(d))
    }

    /// Matrix whose columns are the real coordinates of `g1`, `g2`.
    pub fn from_columns(g1: &Cx<R>, g2: &Cx<R>) -> Self {
        Mat2::new(g1.re.clone(), g2.re.clone(), g1.im.clone(), g2.im.clone())
    }

    pub fn det(&self) -> R {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(
            self.d.clone() / det.clone(),
            -self.b.clone() / det.clone(),
            -self.c.clone() / det.clone(),
            self.a.clone() / det,
        ))
    }

    pub fn apply(&self, z: &Cx<R>) -> Cx<R> {
        Cx::new(
            self.a.clone() * z.re.clone() + self.b.clone() * z.im.clone(),
            self.c.clone() * z.re.clone() + self.d.clone() * z.im.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        Mat2::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    pub fn entries(&self) -> [&R; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl<R: ExactField> Mul for Mat2<R> {
    type Output = Mat2<R>;
    fn mul(self, o: Mat2<R>) -> Mat2<R> {
        Mat2::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a * o.b.clone() + self.b * o.d.clone(),
            self.c.clone() * o.a + self.d.clone() * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, Rational};

    #[test]
    fn inverse_and_det() {
        let m = Mat2::<Rational>::from_ints(2, 1, 7, 4);
        assert_eq!(m.det(), int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m * inv, Mat2::identity());
    }
}
