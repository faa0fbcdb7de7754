//! Numerical integration: adaptive Gauss-Kronrod on finite intervals and
//! Gauss-Legendre tensor nodes for the stratified product-measure quadrature.

use crate::error::{Result, StickyError};
use crate::scalar::Real;

// Gauss-Kronrod 7-15 pair on [-1,1]; positive abscissae, symmetric.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss-Kronrod 7-15 panel; returns (integral, error estimate).
fn gk15<R: Real, F: Fn(R) -> R>(f: &F, a: R, b: R) -> (R, R) {
    let half = R::c(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let mut res_k = R::zero();
    let mut res_g = R::zero();
    for i in 0..8 {
        let xi = R::c(XGK[i]);
        let wk = R::c(WGK[i]);
        let fsum = if i == 7 {
            f(c)
        } else {
            f(c - h * xi) + f(c + h * xi)
        };
        res_k += wk * fsum;
        if i % 2 == 1 {
            res_g += R::c(WG[i / 2]) * fsum;
        }
    }
    let integral = res_k * h;
    let err = ((res_k - res_g) * h).abs();
    (integral, err)
}

/// Adaptive quadrature of `f` over [a, b] to absolute tolerance `tol`.
pub fn adaptive_quad<R: Real, F: Fn(R) -> R>(f: F, a: R, b: R, tol: R) -> Result<R> {
    adaptive_quad_split(f, &[a, b], tol)
}

/// Adaptive quadrature with an initial partition (e.g. to isolate a kink).
/// `points` must be non-decreasing; integrates over [points[0], points.last()].
pub fn adaptive_quad_split<R: Real, F: Fn(R) -> R>(f: F, points: &[R], tol: R) -> Result<R> {
    if points.len() < 2 {
        return Err(StickyError::domain(
            "adaptive_quad",
            "need at least two partition points",
        ));
    }
    let total_len = *points.last().unwrap() - points[0];
    if !(total_len >= R::zero()) {
        return Err(StickyError::domain(
            "adaptive_quad",
            "partition must be non-decreasing",
        ));
    }
    if total_len == R::zero() {
        return Ok(R::zero());
    }
    const MAX_PANELS: usize = 4000;
    let mut stack: Vec<(R, R)> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    let mut sum = R::zero();
    let mut err_sum = R::zero();
    let mut panels = 0usize;
    while let Some((a, b)) = stack.pop() {
        let (v, e) = gk15(&f, a, b);
        let local_tol = tol * ((b - a) / total_len).max(R::c(1e-3));
        if e <= local_tol || panels >= MAX_PANELS {
            sum += v;
            err_sum += e;
        } else {
            let m = R::c(0.5) * (a + b);
            if m <= a || m >= b {
                // interval at floating point resolution
                sum += v;
                err_sum += e;
            } else {
                stack.push((a, m));
                stack.push((m, b));
                continue;
            }
        }
        panels += 1;
    }
    if err_sum > tol * R::c(10.0) {
        return Err(StickyError::Quadrature {
            op: "adaptive_quad",
            achieved: err_sum.f64(),
            tol: tol.f64(),
        });
    }
    Ok(sum)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial (nodes accurate to machine precision).
pub fn gauss_legendre<R: Real>(n: usize) -> (Vec<R>, Vec<R>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (
        nodes.into_iter().map(R::c).collect(),
        weights.into_iter().map(R::c).collect(),
    )
}

/// Gauss-Legendre nodes/weights mapped to (a, b).
pub fn gauss_legendre_on<R: Real>(n: usize, a: R, b: R) -> (Vec<R>, Vec<R>) {
    let (x, w) = gauss_legendre::<R>(n);
    let half = R::c(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    (
        x.into_iter().map(|xi| c + h * xi).collect(),
        w.into_iter().map(|wi| wi * h).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // K15 integrates degree <= 22 exactly; x^10 over [0,2]
        let v = adaptive_quad(|x: f64| x.powi(10), 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 2048.0 / 11.0).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = adaptive_quad(|x: f64| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        let want = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert!((v - want).abs() < 1e-10);
    }

    #[test]
    fn split_handles_kink() {
        let f = |x: f64| (x - 1.0).abs();
        let v = adaptive_quad_split(f, &[0.0, 1.0, 3.0], 1e-12).unwrap();
        assert!((v - 2.5).abs() < 1e-12);
    }

    #[test]
    fn gl_nodes_integrate_gaussian() {
        let (x, w) = gauss_legendre_on::<f64>(64, 0.0, 10.0);
        let s: f64 = x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| wi * (-xi * xi).exp())
            .sum();
        let want = 0.88622692545275801364908374167057259139877472806119; // sqrt(pi)/2
        assert!((s - want).abs() < 1e-14, "{s}");
    }

    #[test]
    fn gl_low_orders() {
        let (x, w) = gauss_legendre::<f64>(1);
        assert!(x[0].abs() < 1e-15 && (w[0] - 2.0).abs() < 1e-15);
        let (x, w) = gauss_legendre::<f64>(2);
        assert!((x[1] - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
    }
}
