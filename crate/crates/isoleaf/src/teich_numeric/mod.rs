//! Numeric map from a leaf to Teichmüller space of the torus: the form
//! `(a + b℘_τ)dz` with prescribed absolute periods, its relative period,
//! and traces of cylinder chambers.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use thiserror::Error;

mod leaf;
mod trace;
mod weierstrass;

pub use leaf::{leaf_to_teich, newton, teich_to_leaf, Continuation, LeafSolve, Periods};
pub use trace::{
    boundary_equivariance, boundary_limit, boundary_limits, chamber_trace, hyperbolic_distance, BoundaryLimit,
    ChamberTrace, Cusp, EquivarianceCheck, TraceConfig, TraceSample, BOUNDARY_TOLERANCE,
};
pub use weierstrass::{reduce_tau, wp, wzeta, ModularReduction, WeierstrassData};

pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {}

impl<F: Float + FloatConst + Debug + Send + Sync + 'static> Real for F {}

pub(crate) fn c<F: Real>(x: f64) -> F {
    F::from(x).expect("representable constant")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TeichError {
    #[error("Im τ ≤ 0")]
    NotUpperHalfPlane,
    #[error("pole at {re}+{im}i")]
    PoleAt { re: f64, im: f64 },
    #[error("Legendre relation violated by {0}")]
    LegendreViolation(f64),
    #[error("both target periods vanish")]
    ZeroPeriods,
    #[error("degenerate period system")]
    DegenerateSystem,
    #[error("b = 0")]
    ZeroForm,
    #[error("no preimage under ℘ found")]
    NoInverse,
    #[error("double zero at a 2-torsion point: the leaf is singular here")]
    NoDoubleZeroSplit,
    #[error("Newton iteration did not converge ({} steps recorded)", trace.len())]
    NoConvergence { trace: Vec<(f64, f64, f64)> },
    #[error("chamber traces are implemented for χ = (1, i)")]
    UnsupportedCharacter,
    #[error("u is not primitive")]
    NotPrimitive,
    #[error("sample point not in the chamber")]
    NotInChamber,
    #[error("extrapolated limit {extrapolated} is not within tolerance of {nearest}")]
    BoundaryMismatch { extrapolated: f64, nearest: f64 },
}

/// A point `τ ∈ ℍ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TeichPoint<F> {
    pub tau: Complex<F>,
}

impl<F: Real> TeichPoint<F> {
    pub fn new(tau: Complex<F>) -> Result<Self, TeichError> {
        if tau.im > F::zero() && tau.re.is_finite() && tau.im.is_finite() {
            Ok(TeichPoint { tau })
        } else {
            Err(TeichError::NotUpperHalfPlane)
        }
    }
}
