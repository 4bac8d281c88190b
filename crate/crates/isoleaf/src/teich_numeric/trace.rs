//! Traces of cylinder chambers of the positive leaf in `ℍ²`.

use num_complex::Complex;
use num_integer::Integer;
use num_traits::FromPrimitive;
use rayon::prelude::*;

use super::leaf::{Continuation, Periods};
use super::weierstrass::WeierstrassData;
use super::{c, Real, TeichError};
use crate::field::{Cx, Rational};
use crate::leaf_atlas::{build_positive, ChamberId};
use crate::period_algebra::{unit_character_positive, AnyCharacter, LatticeElement};

/// Tunables for chamber traces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceConfig<F> {
    pub precision: F,
    /// Step along the chamber interior.
    pub step: F,
    /// Boundary offset as a fraction of `|u|`, halved until the point lies
    /// in the chamber.
    pub epsilon: F,
}

impl<F: Real> Default for TraceConfig<F> {
    fn default() -> Self {
        TraceConfig { precision: c(1e-9), step: c(0.1), epsilon: c(1.0 / 64.0) }
    }
}

/// Cusp of `ℍ²`, `p/q` with `q > 0`, or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cusp {
    Infinity,
    Rational { p: i64, q: i64 },
}

impl Cusp {
    pub fn new(p: i64, q: i64) -> Self {
        if q == 0 {
            return Cusp::Infinity;
        }
        let g = p.gcd(&q);
        let s = q.signum();
        Cusp::Rational { p: s * p / g, q: s * q / g }
    }

    /// Image under `x ↦ x + 1`.
    pub fn translate(self) -> Self {
        match self {
            Cusp::Infinity => Cusp::Infinity,
            Cusp::Rational { p, q } => Cusp::new(p + q, q),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Cusp::Infinity => f64::INFINITY,
            Cusp::Rational { p, q } => p as f64 / q as f64,
        }
    }
}

impl std::fmt::Display for Cusp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cusp::Infinity => write!(f, "inf"),
            Cusp::Rational { p, q: 1 } => write!(f, "{p}"),
            Cusp::Rational { p, q } => write!(f, "{p}/{q}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample<F> {
    pub t: F,
    /// Leaf coordinate in the chart of `CC_u`.
    pub z: Complex<F>,
    /// Un-normalized `τ`.
    pub tau: Complex<F>,
    /// Normalized: cusp of the chamber at `∞`, `X₀` at `i`.
    pub sigma: Complex<F>,
    /// `d(σ(t), t + i·log t)` for `t > 1`.
    pub distance: Option<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChamberTrace<F> {
    pub u: LatticeElement,
    /// Limit of `τ`, `−p/q` for `u = p + qi`.
    pub cusp: Cusp,
    pub x0: Complex<F>,
    pub samples: Vec<TraceSample<F>>,
}

impl<F: Real> ChamberTrace<F> {
    pub fn max_distance(&self) -> Option<F> {
        self.samples.iter().filter_map(|s| s.distance).reduce(F::max)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("t,re_sigma,im_sigma,distance\n");
        for s in &self.samples {
            let d = s.distance.map(|d| format!("{:.12}", d.to_f64().unwrap_or(f64::NAN))).unwrap_or_default();
            let f = |x: F| x.to_f64().unwrap_or(f64::NAN);
            out.push_str(&format!("{},{:.12},{:.12},{}\n", f(s.t), f(s.sigma.re), f(s.sigma.im), d));
        }
        out
    }
}

/// `d_{ℍ²}(z, w)`
pub fn hyperbolic_distance<F: Real>(z: Complex<F>, w: Complex<F>) -> F {
    let d = (z - w).norm_sqr();
    (F::one() + d / (c::<F>(2.0) * z.im * w.im)).acosh()
}

fn mobius<F: Real>(m: [i64; 4], tau: Complex<F>) -> Complex<F> {
    let f = |x: i64| c::<F>(x as f64);
    (tau * f(m[0]) + f(m[1])) / (tau * f(m[2]) + f(m[3]))
}

/// `g ∈ SL(2,ℤ)` sending the cusp `−p/q` to `∞`.
fn cusp_to_infinity(u: LatticeElement) -> [i64; 4] {
    let (p, q) = (u.m, u.n);
    let e = p.extended_gcd(&q);
    // x·p − y·q = 1
    [e.x * e.gcd, -e.y * e.gcd, q, p]
}

fn gaussian_periods<F: Real>(chi: &AnyCharacter) -> Result<Periods<F>, TeichError> {
    match chi {
        AnyCharacter::Gaussian(p) if *p == unit_character_positive() => Ok(Periods::of_character(chi)),
        _ => Err(TeichError::UnsupportedCharacter),
    }
}

fn cx<F: Real>(z: Complex<f64>) -> Complex<F> {
    Complex::new(c(z.re), c(z.im))
}

/// Offset `ε` (fraction of `|u|`) for which `u·(t − iε)` lies in `CC_u`.
fn boundary_offset<F: Real>(u: LatticeElement, t: F, eps: F) -> Result<F, TeichError> {
    let atlas = build_positive(u.max_norm().max(1) as u64);
    let idx = atlas.chamber_index(&ChamberId::Cyl { u }).ok_or(TeichError::NotInChamber)?;
    let region = &atlas.chambers[idx].region;
    let t = Rational::from_f64(t.to_f64().unwrap_or(f64::NAN)).ok_or(TeichError::NotInChamber)?;
    let mut e = eps;
    for _ in 0..20 {
        let er = Rational::from_f64(e.to_f64().unwrap_or(f64::NAN)).ok_or(TeichError::NotInChamber)?;
        let uz = Cx::from_ints(u.m, u.n);
        let z = uz * Cx::new(t.clone(), -er);
        if region.contains(&z) {
            return Ok(e);
        }
        e = e / c(2.0);
    }
    Err(TeichError::NotInChamber)
}

/// Continuation from the anchor `τ = 4i` into the chart of `CC_u`, ending at
/// `0.5u − 0.3i·u/|u|`.
fn enter_chamber<F: Real>(g: Periods<F>, u: Complex<f64>, precision: F) -> Result<Continuation<F>, TeichError> {
    let mut cont = Continuation::start(g, Complex::new(F::zero(), c(4.0)), precision)?;
    // anchor representative 1 − 1.76i in the chart of CC_1
    let mut at = cont.at;
    if at.im > F::zero() {
        cont.state.z0 = -cont.state.z0;
        cont.state.z_rel = -cont.state.z_rel;
        at = -at;
    }
    let shift = (at.re - c(1.0)).round();
    cont.at = Complex::new(at.re - shift, at.im);
    cont.state.z_rel = cont.at;

    let ua = u / u.norm();
    let d = 0.25f64.min(0.5 / u.norm());
    let fine: F = c(0.02);
    let pts = [Complex::new(1.5, -0.3), Complex::new(1.5, 0.1), Complex::new(1.5, 0.4), Complex::new(0.4, 0.4)];
    cont.walk_path(&pts.map(cx), fine)?;
    let r = Complex::new(0.4f64, 0.4).norm();
    let a0 = Complex::new(0.4f64, 0.4).arg();
    let a1 = (ua * 0.4 + Complex::<f64>::i() * ua * d).arg();
    let arc: Vec<Complex<F>> = (1..=60).map(|k| cx(Complex::from_polar(r, a0 + (a1 - a0) * k as f64 / 60.0))).collect();
    cont.walk_path(&arc, c(0.01))?;
    cont.walk_path(&[cx(u * 1.5 + Complex::<f64>::i() * ua * d), cx(u * 1.5 - Complex::<f64>::i() * ua * 0.3)], fine)?;
    cont.at = cont.at - cx::<F>(u);
    Ok(cont)
}

/// `τ` of the cone point at `0` of `CC_u`: the double zero sits at the
/// half-period nearest to `z0` close to the corner.
fn corner_point<F: Real>(cont: &Continuation<F>, u: Complex<f64>) -> Result<Complex<F>, TeichError> {
    let mut near = cont.clone();
    let ua = u / u.norm();
    let target = ua * Complex::new(1.0, -1.0) * 0.05;
    near.walk_path(&[cx(ua * Complex::new(1.0, -1.0) * 0.2), cx(target)], c(0.01))?;
    let g = near.periods;
    let mut tau = near.tau();
    let w = WeierstrassData::new(tau, near.precision)?;
    let (x, y) = w.coordinates(near.state.z0 * c::<F>(2.0));
    // 2·z0 is close to the lattice point (rx, ry); its parity names the half-period
    let (rx, ry) = (x.round().to_i64().unwrap_or(0), y.round().to_i64().unwrap_or(0));
    let (hx, hy) = (rx & 1 == 1, ry & 1 == 1);
    if !hx && !hy {
        return Err(TeichError::NoConvergence { trace: Vec::new() });
    }
    let omega = |tau: Complex<F>| {
        let fx: F = if hx { c(0.5) } else { F::zero() };
        let fy: F = if hy { c(0.5) } else { F::zero() };
        tau * fy + fx
    };
    let f = |tau: Complex<F>| -> Result<Complex<F>, TeichError> {
        let w = WeierstrassData::new(tau, near.precision)?;
        let e = w.wp(omega(tau))?;
        Ok(g.g1 * (e * tau + w.eta2) - g.g2 * (e + w.eta1))
    };
    let h: F = c(1e-7);
    for _ in 0..60 {
        let v = f(tau)?;
        let dv = (f(tau + h)? - v) / h;
        let mut step = v / dv;
        if step.norm() > tau.im * c(0.3) {
            step = step * (tau.im * c(0.3) / step.norm());
        }
        tau = tau - step;
        if step.norm() < c(1e-13) {
            return Ok(tau);
        }
    }
    Err(TeichError::NoConvergence { trace: Vec::new() })
}

/// Traces `CC_u` of the positive leaf `χ = (1, i)` along its boundary ray.
pub fn chamber_trace<F: Real>(
    chi: &AnyCharacter,
    u: LatticeElement,
    t_samples: &[F],
    cfg: &TraceConfig<F>,
) -> Result<ChamberTrace<F>, TeichError> {
    let g = gaussian_periods::<F>(chi)?;
    if u.is_zero() || u.m.gcd(&u.n) != 1 {
        return Err(TeichError::NotPrimitive);
    }
    let uc = Complex::new(u.m as f64, u.n as f64);
    let ua = uc / uc.norm();
    let mut cont = enter_chamber(g, uc, cfg.precision)?;
    let x0 = corner_point(&cont, uc)?;
    let m = cusp_to_infinity(u);
    let gx0 = mobius(m, x0);
    let normalize = |tau: Complex<F>| {
        let w = mobius(m, tau);
        Complex::new((w.re - gx0.re) / gx0.im, w.im / gx0.im)
    };
    let mut ts: Vec<F> = t_samples.to_vec();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite t"));
    let mut samples = Vec::new();
    for t in ts {
        if t == F::zero() {
            samples.push(TraceSample { t, z: Complex::new(F::zero(), F::zero()), tau: x0, sigma: normalize(x0), distance: None });
            continue;
        }
        let tf = t.to_f64().unwrap_or(f64::NAN);
        cont.walk_to(cx(uc * tf - Complex::<f64>::i() * ua * 0.5), cfg.step)?;
        let eps = boundary_offset(u, t, cfg.epsilon)?;
        let z = cx::<F>(uc * tf) - cx::<F>(Complex::<f64>::i() * uc) * eps;
        let mut edge = cont.clone();
        edge.walk_to(z, c(0.02))?;
        let sigma = normalize(edge.tau());
        let distance = (t > F::one()).then(|| hyperbolic_distance(sigma, Complex::new(t, t.ln())));
        samples.push(TraceSample { t, z, tau: edge.tau(), sigma, distance });
    }
    Ok(ChamberTrace { u, cusp: Cusp::new(-u.m, u.n), x0, samples })
}

/// Boundary point of `CC_u` in `∂ℍ²`, reported as `p/q` for `u = p + qi`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryLimit {
    pub u: LatticeElement,
    /// Richardson extrapolation of `−Re τ(t)` (or `∞`).
    pub extrapolated: f64,
    pub rational: Cusp,
    pub raw: Vec<(f64, Complex<f64>)>,
}

pub const BOUNDARY_TOLERANCE: f64 = 0.05;

pub fn boundary_limit(u: LatticeElement, cfg: &TraceConfig<f64>) -> Result<BoundaryLimit, TeichError> {
    let chi = AnyCharacter::Gaussian(unit_character_positive());
    let ts = [4.0, 16.0, 64.0];
    let tr = chamber_trace(&chi, u, &ts, cfg)?;
    let raw: Vec<(f64, Complex<f64>)> = tr.samples.iter().map(|s| (s.t, s.tau)).collect();
    let (t1, a) = raw[1];
    let (t2, b) = raw[2];
    let extrapolated = if b.norm() > 8.0 && b.im > a.im {
        f64::INFINITY
    } else {
        // Re τ(t) ≈ L + k/t
        -(t2 * b.re - t1 * a.re) / (t2 - t1)
    };
    let q = u.n.abs();
    let rational = if !extrapolated.is_finite() {
        Cusp::Infinity
    } else if q == 0 {
        return Err(TeichError::BoundaryMismatch { extrapolated, nearest: f64::INFINITY });
    } else {
        (1..=q)
            .map(|d| Cusp::new((extrapolated * d as f64).round() as i64, d))
            .min_by(|x, y| (x.value() - extrapolated).abs().total_cmp(&(y.value() - extrapolated).abs()))
            .expect("q ≥ 1")
    };
    if rational != Cusp::Infinity && (rational.value() - extrapolated).abs() > BOUNDARY_TOLERANCE {
        return Err(TeichError::BoundaryMismatch { extrapolated, nearest: rational.value() });
    }
    Ok(BoundaryLimit { u, extrapolated, rational, raw })
}

/// Limits of `u` and `T·u` for `T = [[1,1],[0,1]]`; equivariant when the
/// second is the translate of the first.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceCheck {
    pub limit: BoundaryLimit,
    pub image: BoundaryLimit,
    pub pass: bool,
}

pub fn boundary_equivariance(u: LatticeElement, cfg: &TraceConfig<f64>) -> Result<EquivarianceCheck, TeichError> {
    let tu = LatticeElement::new(u.m + u.n, u.n);
    let (limit, image) = rayon::join(|| boundary_limit(u, cfg), || boundary_limit(tu, cfg));
    let (limit, image) = (limit?, image?);
    let pass = image.rational == limit.rational.translate();
    Ok(EquivarianceCheck { limit, image, pass })
}

/// Independent traces run in parallel.
pub fn boundary_limits(us: &[LatticeElement], cfg: &TraceConfig<f64>) -> Vec<Result<BoundaryLimit, TeichError>> {
    us.par_iter().map(|&u| boundary_limit(u, cfg)).collect()
}
