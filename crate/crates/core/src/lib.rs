//! Sticky reflected (distorted) Brownian motion on [0,inf)^n: closed-form
//! transition/resolvent kernels, exact and approximate path samplers,
//! Girsanov weights for distorted dynamics, and validation diagnostics.
//!
//! The analytic layer (special functions, kernels, quadrature, measures,
//! models) is generic over the scalar type through [`scalar::Real`]; the
//! Monte Carlo layer (paths, girsanov, diagnostics) is f64.

pub mod diagnostics;
pub mod error;
pub mod girsanov;
pub mod heat;
pub mod kernel;
pub mod measure;
pub mod models;
pub mod paths;
pub mod quad;
pub mod scalar;
pub mod special;
pub mod stats;

pub use error::{Result, StickyError};
pub use kernel::{KernelDecomposition, StickyParams, TransitionLaw};
pub use models::{DensityModel, PairPotential};
pub use paths::{PathSample, TimeGrid};
pub use scalar::Real;

/// Default scalar type for the concrete aliases below.
pub type Scalar = f64;

/// Parameters at the default scalar type.
pub type Params = StickyParams<Scalar>;

/// Product-measure quadrature spec at the default scalar type.
pub type MeasureSpec = measure::ProductMeasureSpec<Scalar>;

/// Density model at the default scalar type.
pub type Model = DensityModel<Scalar>;
