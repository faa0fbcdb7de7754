//! Scalar abstraction for the analytic layer.
//!
//! The kernel and quadrature code is generic over [`Real`] (f32 or f64).
//! Special functions evaluate internally in double precision and convert,
//! so an f32 instantiation gets correctly rounded results rather than a
//! low-precision re-derivation.

use std::fmt::{Debug, Display};

/// Floating point scalar: f32 or f64.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + num_traits::NumAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lift an f64 constant into this scalar type.
    #[inline]
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
