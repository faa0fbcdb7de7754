//! Closed-form heat and resolvent densities on the half line.
//!
//! These are the scalar building blocks the transition kernel composes:
//! the free Gaussian density, its Dirichlet (image-charge) variant, the
//! sticky boundary weight `g_{0,gamma}` and the Dirichlet resolvent density.
//! All are for the unit-variance convention; the kernel module applies the
//! sqrt(2) coordinate rescaling.

use crate::error::{Result, StickyError};
use crate::scalar::Real;
use crate::special::erfcx;

fn check_time<R: Real>(op: &'static str, t: R) -> Result<()> {
    if !(t > R::zero()) || !t.is_finite() {
        return Err(StickyError::domain(op, format!("t must be > 0, got {t}")));
    }
    Ok(())
}

fn check_nonneg<R: Real>(op: &'static str, name: &str, v: R) -> Result<()> {
    if !(v >= R::zero()) || !v.is_finite() {
        return Err(StickyError::domain(
            op,
            format!("{name} must be finite and >= 0, got {v}"),
        ));
    }
    Ok(())
}

/// Gaussian transition density `p(t,x,y) = (2 pi t)^{-1/2} exp(-(x-y)^2/(2t))`.
pub fn gauss_heat<R: Real>(t: R, x: R, y: R) -> Result<R> {
    check_time("gauss_heat", t)?;
    let two = R::c(2.0);
    let tau = R::c(std::f64::consts::TAU);
    let d = x - y;
    Ok((-(d * d) / (two * t)).exp() / (tau * t).sqrt())
}

/// Dirichlet heat kernel `p(t,x,y) - p(t,x,-y)` on [0,inf).
pub fn dirichlet_heat<R: Real>(t: R, x: R, y: R) -> Result<R> {
    check_time("dirichlet_heat", t)?;
    check_nonneg("dirichlet_heat", "x", x)?;
    check_nonneg("dirichlet_heat", "y", y)?;
    Ok(gauss_heat(t, x, y)? - gauss_heat(t, x, -y)?)
}

/// Sticky boundary weight
/// `g_{0,gamma}(t,x) = (1/gamma) exp(2x/gamma + 2t/gamma^2) erfc(x/sqrt(2t) + sqrt(2t)/gamma)`.
///
/// Evaluated in the cancellation-safe form
/// `(1/gamma) exp(-x^2/(2t)) erfcx(x/sqrt(2t) + sqrt(2t)/gamma)`,
/// which follows from `2x/gamma + 2t/gamma^2 - (x/sqrt(2t)+sqrt(2t)/gamma)^2 = -x^2/(2t)`
/// and cannot overflow for large `x/gamma`.
pub fn sticky_g<R: Real>(t: R, x: R, gamma: R) -> Result<R> {
    check_time("sticky_g", t)?;
    check_nonneg("sticky_g", "x", x)?;
    if !(gamma > R::zero()) || !gamma.is_finite() {
        return Err(StickyError::domain(
            "sticky_g",
            format!("gamma must be > 0, got {gamma}"),
        ));
    }
    let two = R::c(2.0);
    let s = (two * t).sqrt();
    let z = x / s + s / gamma;
    Ok((-(x * x) / (two * t)).exp() * erfcx(z)? / gamma)
}

/// Dirichlet resolvent density of unit-variance Brownian motion killed at 0:
/// `(2 lambda)^{-1/2} (exp(-sqrt(2 lambda)|x-y|) - exp(-sqrt(2 lambda)(x+y)))`.
pub fn dirichlet_resolvent<R: Real>(lambda: R, x: R, y: R) -> Result<R> {
    if !(lambda > R::zero()) || !lambda.is_finite() {
        return Err(StickyError::domain(
            "dirichlet_resolvent",
            format!("lambda must be > 0, got {lambda}"),
        ));
    }
    check_nonneg("dirichlet_resolvent", "x", x)?;
    check_nonneg("dirichlet_resolvent", "y", y)?;
    let a = (R::c(2.0) * lambda).sqrt();
    Ok(((-a * (x - y).abs()).exp() - (-a * (x + y)).exp()) / a)
}
