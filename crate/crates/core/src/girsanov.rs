//! Girsanov weights turning driftless sticky paths into distorted ones
//! (drift `grad ln rho = -2 grad H`), in the Ito-reduced form (computable
//! from states alone) and the stochastic-integral form (needs the driving
//! noise), plus weighted estimators and the tail/Kato probes.

use rand::Rng;

use crate::error::{Result, StickyError};
use crate::kernel::{resolvent_density, StickyParams};
use crate::models::DensityModel;
use crate::paths::{sample_exact_grid, PathSample, TimeGrid};
use crate::quad::adaptive_quad_split;
use crate::stats::mean_stderr;

/// Log of the Girsanov weight, decomposed as produced by Ito's formula:
/// `ln Z_t = [H(X_0) - H(X_t)] + (1/beta) sum_i int dH_i 1_{0}(X^i) ds
///           + sum_i int (d2H_i - (dH_i)^2) 1_{(0,inf)}(X^i) ds`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LogWeight {
    pub endpoint_term: f64,
    pub boundary_term: f64,
    pub bulk_term: f64,
    pub total: f64,
}

fn finite_or_err(op: &'static str, v: f64, state: &[f64]) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(StickyError::NonFinite {
            op,
            state: state.to_vec(),
        })
    }
}

/// Ito-reduced log-weight: left-endpoint Riemann sums of the boundary and
/// bulk terms on the path grid, exact endpoint difference.
pub fn logweight_ito(path: &PathSample, model: &DensityModel<f64>) -> Result<LogWeight> {
    let n = path.dim();
    if model.n != n {
        return Err(StickyError::Dimension {
            op: "logweight_ito",
            expected: n,
            got: model.n,
        });
    }
    let first = &path.states[0];
    let last = path.states.last().unwrap();
    let endpoint_term = finite_or_err("logweight_ito", model.h(first) - model.h(last), last)?;
    let mut boundary_term = 0.0;
    let mut bulk_term = 0.0;
    for k in 0..path.states.len() - 1 {
        let dt = path.grid.dt(k);
        let x = &path.states[k];
        let grad = model.grad_h(x);
        let lap = model.lap_diag_h(x);
        for i in 0..n {
            finite_or_err("logweight_ito", grad[i] + lap[i], x)?;
            if x[i] == 0.0 {
                boundary_term += grad[i] / path.beta * dt;
            } else {
                bulk_term += (lap[i] - grad[i] * grad[i]) * dt;
            }
        }
    }
    Ok(LogWeight {
        endpoint_term,
        boundary_term,
        bulk_term,
        total: endpoint_term + boundary_term + bulk_term,
    })
}

/// Stochastic-integral log-weight
/// `sqrt2 sum_i int d_i ln(phi) 1_{(0,inf)} dB^i - sum_i int (d_i ln phi)^2 1_{(0,inf)} ds`
/// with `d_i ln(phi) = -dH_i`, discretized on the recorded noise increments.
pub fn logweight_integral(path: &PathSample, model: &DensityModel<f64>) -> Result<f64> {
    let noise = path.noise.as_ref().ok_or(StickyError::Domain {
        op: "logweight_integral",
        msg: "path carries no driving-noise increments".into(),
    })?;
    let n = path.dim();
    if model.n != n {
        return Err(StickyError::Dimension {
            op: "logweight_integral",
            expected: n,
            got: model.n,
        });
    }
    let mut total = 0.0;
    for k in 0..path.states.len() - 1 {
        let dt = path.grid.dt(k);
        let x = &path.states[k];
        let grad = model.grad_h(x);
        for i in 0..n {
            if x[i] > 0.0 {
                let g = finite_or_err("logweight_integral", grad[i], x)?;
                total += -std::f64::consts::SQRT_2 * g * noise[k][i] - g * g * dt;
            }
        }
    }
    Ok(total)
}

/// Monte Carlo estimate of the distorted semigroup `p_t f(x0) = E[Z_t f(X_t)]`
/// over exact-grid sticky paths with Ito-reduced weights.
/// Returns (estimate, standard error).
pub fn weighted_expectation<F, G>(
    f: F,
    t: f64,
    x0: &[f64],
    model: &DensityModel<f64>,
    params: &StickyParams<f64>,
    n_paths: usize,
    n_steps: usize,
    rng: &mut G,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64,
    G: Rng + ?Sized,
{
    if n_paths < 100 {
        return Err(StickyError::domain(
            "weighted_expectation",
            "need n_paths >= 100",
        ));
    }
    let grid = TimeGrid::uniform(t, n_steps)?;
    let mut vals = Vec::with_capacity(n_paths);
    for _ in 0..n_paths {
        let path = sample_exact_grid(x0, &grid, params, rng)?;
        let z = logweight_ito(&path, model)?.total.exp();
        vals.push(z * f(path.states.last().unwrap()));
    }
    mean_stderr(&vals)
}

/// Explicit exit-probability bound `C(k) = n sqrt(t/2 pi) (4/(k-d)) exp(-(k-d)^2/(2t))`.
pub fn tail_bound_c(k: f64, d: f64, t: f64, n: usize) -> Result<f64> {
    if !(k > d && d >= 0.0) || !(t > 0.0) {
        return Err(StickyError::domain(
            "tail_bound_c",
            format!("need k > d >= 0 and t > 0, got k = {k}, d = {d}, t = {t}"),
        ));
    }
    let gap = k - d;
    Ok(n as f64 * (t / std::f64::consts::TAU).sqrt() * 4.0 / gap * (-gap * gap / (2.0 * t)).exp())
}

/// Monte Carlo probe of the truncation condition: max over the corners and
/// center of the box `[0, d]^n` of `E_x[1_{tau_k <= t} Z_t]`, with `tau_k`
/// the exit time of `[0, k)^n` observed on the path grid.
#[allow(clippy::too_many_arguments)]
pub fn truncated_weight_probe<G: Rng + ?Sized>(
    t: f64,
    d: f64,
    k: f64,
    model: &DensityModel<f64>,
    params: &StickyParams<f64>,
    n_paths: usize,
    n_steps: usize,
    rng: &mut G,
) -> Result<f64> {
    if !(k > d && d > 0.0) {
        return Err(StickyError::domain(
            "truncated_weight_probe",
            "need k > d > 0",
        ));
    }
    let n = params.n;
    let grid = TimeGrid::uniform(t, n_steps)?;
    // corners of [0,d]^n plus the center
    let mut starts: Vec<Vec<f64>> = (0..1usize << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { d } else { 0.0 }).collect())
        .collect();
    starts.push(vec![d / 2.0; n]);
    let mut worst = 0.0f64;
    for x0 in &starts {
        let mut vals = Vec::with_capacity(n_paths);
        for _ in 0..n_paths {
            let path = sample_exact_grid(x0, &grid, params, rng)?;
            let exited = path
                .states
                .iter()
                .any(|s| s.iter().any(|&v| v >= k));
            let z = if exited {
                logweight_ito(&path, model)?.total.exp()
            } else {
                0.0
            };
            vals.push(z);
        }
        let (mean, _) = mean_stderr(&vals)?;
        worst = worst.max(mean);
    }
    Ok(worst)
}

/// Resolvent of the energy density `2 (d ln phi)^2 1_{(0,inf)}` at x (n = 1):
/// `int_0^inf r_lambda(x, y) 2 H'(y)^2 dy`, by adaptive quadrature with a
/// kink split at y = x.
pub fn kato_potential(
    lambda: f64,
    x: f64,
    model: &DensityModel<f64>,
    params: &StickyParams<f64>,
) -> Result<f64> {
    if model.n != 1 || params.n != 1 {
        return Err(StickyError::Dimension {
            op: "kato_potential",
            expected: 1,
            got: model.n.max(params.n),
        });
    }
    if !(lambda > 0.0) {
        return Err(StickyError::domain("kato_potential", "lambda must be > 0"));
    }
    // truncation where the resolvent kernel has decayed below ~1e-40
    let hi = x + 95.0 / lambda.sqrt();
    let p = *params;
    let m = model.clone();
    let v = adaptive_quad_split(
        move |y: f64| {
            let g = m.grad_h(&[y])[0];
            resolvent_density(lambda, x, y, &p).unwrap_or(f64::NAN) * 2.0 * g * g
        },
        &[0.0, x.min(hi), hi],
        1e-8 * (1.0 + x * x / lambda),
    )?;
    finite_or_err("kato_potential", v, &[x])
}
