//! Quadrature against the product measure `mu_n = prod_i (dx_i + beta delta_0)`
//! on [0,R]^n and the stationary expectation functional it induces.
//!
//! mu_n splits exactly into 2^n strata indexed by the set B of "free"
//! coordinates: Lebesgue measure over the B-coordinates, the rest pinned to 0,
//! weighted beta^(n - #B). Each stratum is integrated by tensorized
//! Gauss-Legendre nodes, so the only approximation is 1D quadrature.

use crate::error::{Result, StickyError};
use crate::models::DensityModel;
use crate::quad::gauss_legendre_on;
use crate::scalar::Real;

/// Truncated product-measure quadrature specification.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProductMeasureSpec<R> {
    pub n: usize,
    pub beta: R,
    /// Per-coordinate truncation bound; the caller asserts decay beyond R.
    pub r: R,
    /// 1D quadrature nodes per stratum axis.
    pub resolution: usize,
}

/// Largest dimension for which the 2^n strata are enumerated.
pub const MAX_DIM: usize = 12;

impl<R: Real> ProductMeasureSpec<R> {
    pub fn new(n: usize, beta: R, r: R, resolution: usize) -> Result<Self> {
        if n < 1 || n > MAX_DIM {
            return Err(StickyError::domain(
                "ProductMeasureSpec",
                format!("n must be in 1..={MAX_DIM}, got {n}"),
            ));
        }
        if !(beta > R::zero()) || !beta.is_finite() {
            return Err(StickyError::domain(
                "ProductMeasureSpec",
                format!("beta must be > 0, got {beta}"),
            ));
        }
        if !(r > R::zero()) || !r.is_finite() {
            return Err(StickyError::domain(
                "ProductMeasureSpec",
                format!("R must be > 0, got {r}"),
            ));
        }
        if resolution < 2 {
            return Err(StickyError::domain(
                "ProductMeasureSpec",
                "resolution must be >= 2",
            ));
        }
        Ok(ProductMeasureSpec {
            n,
            beta,
            r,
            resolution,
        })
    }
}

/// One stratum of mu_n: the coordinates in `free` carry Lebesgue measure on
/// (0,R], the rest are pinned to 0; `weight = beta^(n - #free)`.
#[derive(Debug, Clone)]
pub struct Stratum<R> {
    pub free: Vec<usize>,
    pub weight: R,
}

/// Enumerate all 2^n strata in subset-bitmask order.
pub fn strata<R: Real>(spec: &ProductMeasureSpec<R>) -> Vec<Stratum<R>> {
    let n = spec.n;
    (0..1usize << n)
        .map(|mask| {
            let free: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let pinned = n - free.len();
            Stratum {
                free,
                weight: spec.beta.powi(pinned as i32),
            }
        })
        .collect()
}

/// Integral of `f` against mu_n restricted to [0,R]^n.
///
/// Exact stratification plus tensor Gauss-Legendre per stratum; summation in
/// subset-enumeration order for determinism.
pub fn integrate_mu<R: Real, F: Fn(&[R]) -> R>(f: F, spec: &ProductMeasureSpec<R>) -> Result<R> {
    let (nodes, weights) = gauss_legendre_on::<R>(spec.resolution, R::zero(), spec.r);
    let mut total = R::zero();
    let mut x = vec![R::zero(); spec.n];
    let mut idx = vec![0usize; spec.n];
    for stratum in strata(spec) {
        let k = stratum.free.len();
        for v in x.iter_mut() {
            *v = R::zero();
        }
        let mut stratum_sum = R::zero();
        if k == 0 {
            stratum_sum = f(&x);
            if !stratum_sum.is_finite() {
                return Err(StickyError::NonFinite {
                    op: "integrate_mu",
                    state: x.iter().map(|v| v.f64()).collect(),
                });
            }
        } else {
            // odometer over the tensor grid of the free coordinates
            idx[..k].iter_mut().for_each(|i| *i = 0);
            'grid: loop {
                let mut w = R::one();
                for (slot, &coord) in idx[..k].iter().zip(&stratum.free) {
                    x[coord] = nodes[*slot];
                    w *= weights[*slot];
                }
                let v = f(&x);
                if !v.is_finite() {
                    return Err(StickyError::NonFinite {
                        op: "integrate_mu",
                        state: x.iter().map(|v| v.f64()).collect(),
                    });
                }
                stratum_sum += w * v;
                for d in 0..k {
                    idx[d] += 1;
                    if idx[d] < spec.resolution {
                        continue 'grid;
                    }
                    idx[d] = 0;
                }
                break;
            }
        }
        total += stratum.weight * stratum_sum;
    }
    Ok(total)
}

/// Stationary (Gibbs) expectation `int F rho dmu_n / int rho dmu_n` on the
/// truncated box.
pub fn stationary_expectation<R: Real, F: Fn(&[R]) -> R>(
    f: F,
    rho: &DensityModel<R>,
    spec: &ProductMeasureSpec<R>,
) -> Result<R> {
    let num = integrate_mu(|x| f(x) * rho.rho(x), spec)?;
    let den = integrate_mu(|x| rho.rho(x), spec)?;
    if !(den > R::c(1e-300)) {
        return Err(StickyError::DegenerateMeasure {
            op: "stationary_expectation",
            value: den.f64(),
        });
    }
    Ok(num / den)
}
