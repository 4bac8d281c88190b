//! `℘`, `ζ` and quasi-periods for the lattice `ℤ + τℤ` via q-series.

use num_complex::Complex;

use super::{c, Real, TeichError, TeichPoint};

/// `τ' = (aτ + b)/(cτ + d)` in the standard fundamental domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularReduction {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

pub fn reduce_tau<F: Real>(tau: Complex<F>) -> (Complex<F>, ModularReduction) {
    let (mut a, mut b, mut cc, mut d) = (1i64, 0i64, 0i64, 1i64);
    let mut t = tau;
    let almost_one = F::one() - F::epsilon() * c(16.0);
    for _ in 0..200 {
        let n = t.re.round();
        let ni = n.to_i64().expect("finite τ");
        t.re = t.re - n;
        a -= ni * cc;
        b -= ni * d;
        if t.norm() < almost_one {
            t = -t.inv();
            (a, b, cc, d) = (-cc, -d, a, b);
        } else {
            break;
        }
    }
    (t, ModularReduction { a, b, c: cc, d })
}

/// `(℘, ζ, ℘')` at `z` for the reduced lattice, `|Re z| ≤ 1/2`,
/// `|Im z| ≤ Im τ/2`; `eta_half = ζ(1/2)`.
fn series<F: Real>(z: Complex<F>, tau: Complex<F>, eta_half: Complex<F>) -> (Complex<F>, Complex<F>, Complex<F>) {
    let pi = F::PI();
    let two_pi_i = Complex::new(F::zero(), pi + pi);
    let q = (two_pi_i * tau).exp();
    let (mut s_wp, mut s_zeta, mut s_dwp) = (Complex::new(F::zero(), F::zero()), Complex::new(F::zero(), F::zero()), Complex::new(F::zero(), F::zero()));
    let mut qn = q;
    let growth = (c::<F>(2.0) * pi * z.im.abs()).exp();
    let mut n = 1usize;
    loop {
        let nf: F = c(n as f64);
        let f = qn / (Complex::new(F::one(), F::zero()) - qn);
        let arg = z * (c::<F>(2.0) * nf * pi);
        let (cs, sn) = (arg.cos(), arg.sin());
        s_wp = s_wp + f * cs * nf;
        s_zeta = s_zeta + f * sn;
        s_dwp = s_dwp + f * sn * (nf * nf);
        let size = qn.norm() * growth.powi(n as i32) * nf * nf;
        if (size < F::epsilon() * c(1e-3) && n > 2) || n > 10_000 {
            break;
        }
        n += 1;
        qn = qn * q;
    }
    let pz = z * pi;
    let (s, co) = (pz.sin(), pz.cos());
    let pi2 = pi * pi;
    let wp = -eta_half * c::<F>(2.0) + (s * s).inv() * pi2 - s_wp * (c::<F>(8.0) * pi2);
    let zeta = z * eta_half * c::<F>(2.0) + co / s * pi + s_zeta * (c::<F>(4.0) * pi);
    let dwp = -co / (s * s * s) * (c::<F>(2.0) * pi2 * pi) + s_dwp * (c::<F>(16.0) * pi2 * pi);
    (wp, zeta, dwp)
}

/// `ζ(1/2)` for `ℤ + τℤ`, from `E₂`.
fn eta_half<F: Real>(tau: Complex<F>) -> Complex<F> {
    let pi = F::PI();
    let q = (Complex::new(F::zero(), pi + pi) * tau).exp();
    let mut s = Complex::new(F::zero(), F::zero());
    let mut qn = q;
    for n in 1..10_000 {
        let nf: F = c(n as f64);
        let term = qn / (Complex::new(F::one(), F::zero()) - qn) * nf;
        s = s + term;
        if term.norm() < F::epsilon() * c(1e-3) {
            break;
        }
        qn = qn * q;
    }
    (Complex::new(F::one(), F::zero()) - s * c::<F>(24.0)) * (pi * pi / c(6.0))
}

/// Lattice `ℤ + τℤ` with quasi-periods `η1 = 2ζ(1/2)`, `η2 = 2ζ(τ/2)`.
#[derive(Clone, Debug)]
pub struct WeierstrassData<F> {
    pub tau: Complex<F>,
    pub eta1: Complex<F>,
    pub eta2: Complex<F>,
    pub precision: F,
    reduced: Complex<F>,
    lambda: Complex<F>,
    eta_reduced: (Complex<F>, Complex<F>),
}

impl<F: Real> WeierstrassData<F> {
    pub fn new(tau: Complex<F>, precision: F) -> Result<Self, TeichError> {
        TeichPoint::new(tau)?;
        let (red, m) = reduce_tau(tau);
        let lambda = tau * c::<F>(m.c as f64) + c::<F>(m.d as f64);
        let e1 = eta_half(red) * c::<F>(2.0);
        let two_pi_i = Complex::new(F::zero(), F::PI() + F::PI());
        let e2 = e1 * red - two_pi_i;
        // 1/λ = a − cτ', τ/λ = dτ' − b
        let (fa, fb, fc, fd) = (c::<F>(m.a as f64), c::<F>(m.b as f64), c::<F>(m.c as f64), c::<F>(m.d as f64));
        let eta1 = (e1 * fa - e2 * fc) / lambda;
        let eta2 = (e2 * fd - e1 * fb) / lambda;
        let data = WeierstrassData { tau, eta1, eta2, precision, reduced: red, lambda, eta_reduced: (e1, e2) };
        let res = data.legendre_residual();
        let scale = F::one().max(eta1.norm() * tau.norm());
        if res > precision * scale {
            return Err(TeichError::LegendreViolation(res.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(data)
    }

    /// `|η1·τ − η2 − 2πi|`
    pub fn legendre_residual(&self) -> F {
        (self.eta1 * self.tau - self.eta2 - Complex::new(F::zero(), F::PI() + F::PI())).norm()
    }

    /// Reduces `z/λ` into the reduced cell: `(w, n, m)` with `z/λ = w + n + mτ'`.
    fn cell(&self, z: Complex<F>) -> Result<(Complex<F>, F, F), TeichError> {
        let zz = z / self.lambda;
        let m = (zz.im / self.reduced.im).round();
        let w = zz - self.reduced * m;
        let n = w.re.round();
        let w = w - n;
        if w.norm() < F::epsilon().sqrt() * c(1e-2) {
            return Err(TeichError::PoleAt { re: z.re.to_f64().unwrap_or(f64::NAN), im: z.im.to_f64().unwrap_or(f64::NAN) });
        }
        Ok((w, n, m))
    }

    /// `(℘(z), ζ(z), ℘'(z))`
    pub fn eval(&self, z: Complex<F>) -> Result<(Complex<F>, Complex<F>, Complex<F>), TeichError> {
        let (w, n, m) = self.cell(z)?;
        let (e1, e2) = self.eta_reduced;
        let (wp, zeta, dwp) = series(w, self.reduced, e1 / c::<F>(2.0));
        let l = self.lambda;
        Ok((wp / (l * l), (zeta + e1 * n + e2 * m) / l, dwp / (l * l * l)))
    }

    pub fn wp(&self, z: Complex<F>) -> Result<Complex<F>, TeichError> {
        Ok(self.eval(z)?.0)
    }

    pub fn wzeta(&self, z: Complex<F>) -> Result<Complex<F>, TeichError> {
        Ok(self.eval(z)?.1)
    }

    pub fn wp_prime(&self, z: Complex<F>) -> Result<Complex<F>, TeichError> {
        Ok(self.eval(z)?.2)
    }

    /// `(a, b)` with `∫₀¹ (a + b℘) = p1` and `∫₀^τ (a + b℘) = p2`.
    pub fn solve_form(&self, p1: Complex<F>, p2: Complex<F>) -> Result<(Complex<F>, Complex<F>), TeichError> {
        if p1.norm() + p2.norm() == F::zero() {
            return Err(TeichError::ZeroPeriods);
        }
        // a − bη1 = p1, aτ − bη2 = p2
        let det = self.tau * self.eta1 - self.eta2;
        if det.norm() < self.precision {
            return Err(TeichError::DegenerateSystem);
        }
        let a = (p2 * self.eta1 - p1 * self.eta2) / det;
        let b = (p2 - self.tau * p1) / det;
        Ok((a, b))
    }

    /// `(∫₀¹, ∫₀^τ)` of `(a + b℘)dz`.
    pub fn periods_of_form(&self, a: Complex<F>, b: Complex<F>) -> (Complex<F>, Complex<F>) {
        (a - b * self.eta1, a * self.tau - b * self.eta2)
    }

    /// Point `z0` with `℘(z0) = w`, by damped Newton from `guess` or a grid.
    pub fn inverse_wp(&self, w: Complex<F>, guess: Option<Complex<F>>) -> Result<Complex<F>, TeichError> {
        let mut starts: Vec<Complex<F>> = guess.into_iter().collect();
        if starts.is_empty() {
            for i in 0..6 {
                for j in 0..6 {
                    let (x, y): (F, F) = (c((i as f64 + 0.5) / 6.0), c((j as f64 + 0.5) / 6.0));
                    starts.push(self.tau * y + x);
                }
            }
        }
        let cap: F = c(0.2);
        let tol = F::epsilon().sqrt() * c(1e-1) * F::one().max(w.norm());
        for mut z in starts {
            for _ in 0..80 {
                let Ok((wp, _, dwp)) = self.eval(z) else { break };
                if dwp.norm() == F::zero() {
                    break;
                }
                let mut step = (wp - w) / dwp;
                if step.norm() > cap {
                    step = step * (cap / step.norm());
                }
                z = z - step;
                if step.norm() < F::epsilon() * c(1e2) * F::one().max(z.norm()) {
                    break;
                }
            }
            if let Ok(v) = self.wp(z) {
                if (v - w).norm() < tol {
                    return Ok(z);
                }
            }
        }
        Err(TeichError::NoInverse)
    }

    /// Lattice coordinates `(x, y)` of `z = x + yτ`.
    pub fn coordinates(&self, z: Complex<F>) -> (F, F) {
        let y = z.im / self.tau.im;
        (z.re - y * self.tau.re, y)
    }

    /// `z` is within `tol` of a half-period.
    pub fn is_two_torsion(&self, z: Complex<F>, tol: F) -> bool {
        let (x, y) = self.coordinates(z * c::<F>(2.0));
        let (dx, dy) = (x - x.round(), y - y.round());
        (self.tau * dy + dx).norm() < tol
    }

    /// `∫_{−z0}^{z0} (a + b℘) dz = 2a·z0 − 2b·ζ(z0)`.
    pub fn relative_period_at(&self, a: Complex<F>, b: Complex<F>, z0: Complex<F>) -> Result<Complex<F>, TeichError> {
        Ok(a * z0 * c::<F>(2.0) - b * self.wzeta(z0)? * c::<F>(2.0))
    }

    /// Relative period between the two zeros `±z0` of `a + b℘`.
    pub fn relative_period(
        &self,
        a: Complex<F>,
        b: Complex<F>,
        guess: Option<Complex<F>>,
    ) -> Result<(Complex<F>, Complex<F>), TeichError> {
        if b.norm() < self.precision * F::one().max(a.norm()) {
            return Err(TeichError::ZeroForm);
        }
        let z0 = self.inverse_wp(-a / b, guess)?;
        if self.is_two_torsion(z0, F::epsilon().powf(c(0.3))) {
            return Err(TeichError::NoDoubleZeroSplit);
        }
        Ok((self.relative_period_at(a, b, z0)?, z0))
    }
}

pub fn wp<F: Real>(z: Complex<F>, tau: Complex<F>) -> Result<Complex<F>, TeichError> {
    WeierstrassData::new(tau, c(1e-9))?.wp(z)
}

pub fn wzeta<F: Real>(z: Complex<F>, tau: Complex<F>) -> Result<Complex<F>, TeichError> {
    WeierstrassData::new(tau, c(1e-9))?.wzeta(z)
}
