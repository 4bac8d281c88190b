//! Isoperiodic leaves of the stratum H(1,1,−2).
//!
//! The exact layer ([`period_algebra`], [`surface_kernel`], [`leaf_atlas`],
//! [`veech`]) is generic over [`field::ExactField`]; the numeric layer
//! ([`teich_numeric`]) is generic over [`num_traits::Float`].

pub mod field;
pub mod leaf_atlas;
pub mod period_algebra;
pub mod render;
pub mod surface_kernel;
pub mod teich_numeric;
pub mod veech;

pub use field::{Cx, ExactField, Mat2, QuadReal, Rational};

pub type GaussianRational = field::Cx<Rational>;
pub type QuadComplex = field::Cx<QuadReal>;

pub type GaussianCharacter = period_algebra::PeriodCharacter<Rational>;
pub type QuadraticCharacter = period_algebra::PeriodCharacter<QuadReal>;

pub type RationalAtlas = leaf_atlas::Atlas<Rational>;
pub type QuadAtlas = leaf_atlas::Atlas<QuadReal>;

pub type TeichPoint = teich_numeric::TeichPoint<f64>;
pub type WeierstrassData = teich_numeric::WeierstrassData<f64>;

pub type Complex = num_complex::Complex<f64>;


