//! Leaf coordinate `z_rel` ↔ `τ`, by Newton iteration and path continuation.

use num_complex::Complex;

use super::weierstrass::WeierstrassData;
use super::{c, Real, TeichError, TeichPoint};
use crate::field::ExactField;
use crate::period_algebra::AnyCharacter;

/// Absolute periods `(g1, g2)` and the group `Γ = g1ℤ + g2ℤ` they span.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Periods<F> {
    pub g1: Complex<F>,
    pub g2: Complex<F>,
}

impl<F: Real> Periods<F> {
    pub fn new(g1: Complex<F>, g2: Complex<F>) -> Self {
        Periods { g1, g2 }
    }

    pub fn of_character(chi: &AnyCharacter) -> Self {
        let cx = |re: f64, im: f64| Complex::new(c::<F>(re), c::<F>(im));
        match chi {
            AnyCharacter::Gaussian(p) | AnyCharacter::Rational(p) => {
                let (a, b) = (p.g1(), p.g2());
                Periods::new(cx(a.re.to_f64(), a.im.to_f64()), cx(b.re.to_f64(), b.im.to_f64()))
            }
            AnyCharacter::Quadratic { chi: p, .. } => {
                let (a, b) = (p.g1(), p.g2());
                Periods::new(cx(a.re.to_f64(), a.im.to_f64()), cx(b.re.to_f64(), b.im.to_f64()))
            }
        }
    }

    /// Representative of `z mod Γ` nearest to 0.
    pub fn reduce(&self, z: Complex<F>) -> Complex<F> {
        let det = (self.g1.conj() * self.g2).im;
        let scale = self.g1.norm() * self.g2.norm();
        if det.abs() > scale * c(1e-9) {
            // z = x·g1 + y·g2
            let x = (z.conj() * self.g2).im / det;
            let y = (self.g1.conj() * z).im / det;
            let base = z - self.g1 * x.round() - self.g2 * y.round();
            let mut best = base;
            for i in -1..=1 {
                for j in -1..=1 {
                    let cand = base - self.g1 * c::<F>(i as f64) - self.g2 * c::<F>(j as f64);
                    if cand.norm() < best.norm() {
                        best = cand;
                    }
                }
            }
            best
        } else {
            // rank one over ℝ: small integer combinations
            let mut best = z;
            for i in -24i32..=24 {
                for j in -24i32..=24 {
                    let cand = z - self.g1 * c::<F>(i as f64) - self.g2 * c::<F>(j as f64);
                    if cand.norm() < best.norm() {
                        best = cand;
                    }
                }
            }
            best
        }
    }
}

/// A solved point: `τ`, the zero `z0` of `a + b℘` and its relative period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafSolve<F> {
    pub tau: TeichPoint<F>,
    pub z0: Complex<F>,
    pub z_rel: Complex<F>,
    pub residual: F,
    pub iterations: usize,
}

/// Forward map `τ ↦ z_rel`.
pub fn teich_to_leaf<F: Real>(
    g: &Periods<F>,
    tau: Complex<F>,
    z0_guess: Option<Complex<F>>,
    precision: F,
) -> Result<LeafSolve<F>, TeichError> {
    let w = WeierstrassData::new(tau, precision)?;
    let (a, b) = w.solve_form(g.g1, g.g2)?;
    let (z_rel, z0) = w.relative_period(a, b, z0_guess)?;
    Ok(LeafSolve { tau: TeichPoint::new(tau)?, z0, z_rel, residual: F::zero(), iterations: 0 })
}

/// `(a + b℘(z0), z_rel)` at `(τ, z0)`.
fn system<F: Real>(
    g: &Periods<F>,
    tau: Complex<F>,
    z0: Complex<F>,
    precision: F,
) -> Result<(Complex<F>, Complex<F>, Complex<F>, Complex<F>), TeichError> {
    let w = WeierstrassData::new(tau, precision)?;
    let (a, b) = w.solve_form(g.g1, g.g2)?;
    let (wp, zeta, dwp) = w.eval(z0)?;
    let f1 = a + b * wp;
    let zr = (a * z0 - b * zeta) * c::<F>(2.0);
    Ok((f1, zr, b * dwp, f1 * c::<F>(2.0)))
}

/// Newton in `(τ, z0)` on `a + b℘(z0) = 0`, `z_rel ≡ target mod Γ`.
pub fn newton<F: Real>(
    g: &Periods<F>,
    target: Complex<F>,
    tau: Complex<F>,
    z0: Complex<F>,
    precision: F,
) -> Result<LeafSolve<F>, TeichError> {
    let (mut tau, mut z0) = (tau, z0);
    let mut trace = Vec::new();
    let tol = precision * (F::one() + target.norm());
    let h: F = c(1e-7);
    for it in 0..60 {
        let eval = system(g, tau, z0, precision);
        let Ok((f1, zr, d1z, d2z)) = eval else {
            return Err(TeichError::NoConvergence { trace });
        };
        let d = zr - target;
        let shift = d - g.reduce(d);
        let f2 = d - shift;
        let res = f1.norm().max(f2.norm());
        trace.push((tau.re.to_f64().unwrap_or(f64::NAN), tau.im.to_f64().unwrap_or(f64::NAN), res.to_f64().unwrap_or(f64::NAN)));
        if res < tol && it > 0 {
            return Ok(LeafSolve { tau: TeichPoint::new(tau)?, z0, z_rel: target + f2, residual: res, iterations: it });
        }
        let step_h = Complex::new(h * F::one().max(tau.norm()), F::zero());
        let Ok((g1h, zrh, _, _)) = system(g, tau + step_h, z0, precision) else {
            return Err(TeichError::NoConvergence { trace });
        };
        let d1t = (g1h - f1) / step_h;
        let d2t = (zrh - shift - target - f2) / step_h;
        // [[d1t, d1z], [d2t, d2z]] · (δτ, δz0) = −(f1, f2)
        let det = d1t * d2z - d1z * d2t;
        if det.norm() == F::zero() || !det.norm().is_finite() {
            return Err(TeichError::NoConvergence { trace });
        }
        let mut dt = (-f1 * d2z + d1z * f2) / det;
        let mut dz = (-d1t * f2 + d2t * f1) / det;
        let limit = tau.im * c(0.5);
        if dt.norm() > limit {
            let s = limit / dt.norm();
            dt = dt * s;
            dz = dz * s;
        }
        tau = tau + dt;
        z0 = z0 + dz;
        if !(tau.im > F::zero()) || !tau.norm().is_finite() {
            return Err(TeichError::NoConvergence { trace });
        }
    }
    Err(TeichError::NoConvergence { trace })
}

/// Inverts `z_rel` starting from `τ_guess`; the sign of `z_rel` is matched
/// at the starting point.
pub fn leaf_to_teich<F: Real>(
    g: &Periods<F>,
    z_rel: Complex<F>,
    tau_guess: Complex<F>,
    precision: F,
) -> Result<LeafSolve<F>, TeichError> {
    // τ_guess may be a point where b = 0 (the pure torus); nudge off it
    let nudges = [(0.0, 0.0), (0.05, 0.0), (0.0, 0.05), (-0.05, 0.0), (0.0, -0.05)];
    let mut last = TeichError::NoInverse;
    let mut found = None;
    for (dx, dy) in nudges {
        let t = tau_guess + Complex::new(c::<F>(dx), c::<F>(dy));
        match teich_to_leaf(g, t, None, precision) {
            Ok(s) => {
                found = Some(s);
                break;
            }
            Err(e) => last = e,
        }
    }
    let start = found.ok_or(last)?;
    let tau_guess = start.tau.tau;
    let z0 = if g.reduce(start.z_rel - z_rel).norm() <= g.reduce(start.z_rel + z_rel).norm() {
        start.z0
    } else {
        -start.z0
    };
    newton(g, z_rel, tau_guess, z0, precision)
}

/// Sequential continuation along a path in the leaf chart.
#[derive(Clone, Debug)]
pub struct Continuation<F> {
    pub periods: Periods<F>,
    pub state: LeafSolve<F>,
    pub at: Complex<F>,
    pub precision: F,
    pub min_step: F,
}

impl<F: Real> Continuation<F> {
    pub fn start(periods: Periods<F>, tau: Complex<F>, precision: F) -> Result<Self, TeichError> {
        let state = teich_to_leaf(&periods, tau, None, precision)?;
        Ok(Continuation { periods, at: state.z_rel, state, precision, min_step: c(1e-6) })
    }

    pub fn from_solve(periods: Periods<F>, state: LeafSolve<F>, precision: F) -> Self {
        Continuation { periods, at: state.z_rel, state, precision, min_step: c(1e-6) }
    }

    pub fn tau(&self) -> Complex<F> {
        self.state.tau.tau
    }

    /// Straight segment to `target` in steps of at most `step`, halved on
    /// failure.
    pub fn walk_to(&mut self, target: Complex<F>, step: F) -> Result<(), TeichError> {
        let len = (target - self.at).norm();
        let n = (len / step).ceil().to_usize().unwrap_or(1).max(1);
        let from = self.at;
        for k in 1..=n {
            let p = from + (target - from) * (c::<F>(k as f64) / c(n as f64));
            self.step_to(p, step)?;
        }
        Ok(())
    }

    fn step_to(&mut self, p: Complex<F>, step: F) -> Result<(), TeichError> {
        let mut pending = vec![p];
        let mut h = step;
        while let Some(&q) = pending.last() {
            let s = &self.state;
            match newton(&self.periods, q, s.tau.tau, s.z0, self.precision) {
                Ok(next) if (next.tau.tau - s.tau.tau).norm() <= s.tau.tau.im.max(c(1e-3)) * c(4.0) => {
                    self.state = next;
                    self.at = q;
                    pending.pop();
                }
                Ok(_) | Err(_) => {
                    h = h / c(2.0);
                    if h < self.min_step {
                        return Err(TeichError::NoConvergence { trace: Vec::new() });
                    }
                    let mid = (self.at + q) / c::<F>(2.0);
                    pending.push(mid);
                }
            }
        }
        Ok(())
    }

    /// Polyline through `points` (the first is the current point's target).
    pub fn walk_path(&mut self, points: &[Complex<F>], step: F) -> Result<(), TeichError> {
        for &p in points {
            self.walk_to(p, step)?;
        }
        Ok(())
    }
}
