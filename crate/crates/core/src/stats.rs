//! Small statistics toolbox for the diagnostic suites: Kolmogorov-Smirnov
//! tests, binomial z-tests and deterministic ensemble summaries.

use crate::error::{Result, StickyError};

/// Deterministic pairwise summation (order-independent reductions would lose
/// reproducibility; naive left folds lose accuracy on 1e5+ terms).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    if n < 2 {
        return Err(StickyError::domain("mean_stderr", "need at least 2 samples"));
    }
    let mean = pairwise_sum(xs) / n as f64;
    let sq: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    Ok((mean, (var / n as f64).sqrt()))
}

/// Kolmogorov's limiting tail probability `Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-8 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let sn = n_eff.sqrt();
    kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)
}

/// One-sample KS test of `samples` against a continuous cdf.
/// Returns (statistic D, asymptotic p-value).
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<(f64, f64)> {
    let n = samples.len();
    if n < 8 {
        return Err(StickyError::domain("ks_one_sample", "need at least 8 samples"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let c = cdf(x);
        d = d.max((c - i as f64 / nf).abs()).max(((i + 1) as f64 / nf - c).abs());
    }
    Ok((d, ks_p_value(d, nf)))
}

/// Two-sample KS test (both samples from continuous laws).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() < 8 || b.len() < 8 {
        return Err(StickyError::domain("ks_two_sample", "need at least 8 samples each"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("non-NaN samples"));
    ys.sort_by(|p, q| p.partial_cmp(q).expect("non-NaN samples"));
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let (x, y) = (xs[i], ys[j]);
        if x <= y {
            i += 1;
        }
        if y <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    Ok((d, ks_p_value(d, n_eff)))
}

/// z-statistic of `successes` out of `n` trials against success probability `p0`.
pub fn binomial_z(successes: usize, n: usize, p0: f64) -> Result<f64> {
    if n == 0 || !(0.0 < p0 && p0 < 1.0) {
        return Err(StickyError::domain(
            "binomial_z",
            "need n > 0 and p0 in (0,1)",
        ));
    }
    let nf = n as f64;
    Ok((successes as f64 / nf - p0) / (p0 * (1.0 - p0) / nf).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairwise_sum_accuracy() {
        let xs = vec![0.1f64; 1_000_000];
        let s = pairwise_sum(&xs);
        assert!((s - 100_000.0).abs() < 1e-7, "{s}");
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[3.5]), 3.5);
    }

    #[test]
    fn mean_stderr_basic() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((m - 2.5).abs() < 1e-15);
        // var = 5/3, se = sqrt(5/12)
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(mean_stderr(&[1.0]).is_err());
    }

    #[test]
    fn kolmogorov_q_reference_values() {
        // Q(0.5) and Q(1.0) frozen from independent series summation
        assert!((kolmogorov_q(0.5) - 0.96394524366487506).abs() < 1e-12);
        assert!((kolmogorov_q(1.0) - 0.26999967167735452110631912672754313538944254374058).abs() < 1e-12);
        assert!(kolmogorov_q(1e-12) == 1.0);
        assert!(kolmogorov_q(5.0) < 1e-10);
    }

    #[test]
    fn ks_accepts_correct_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let (d, p) = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(p > 0.01, "D={d} p={p}");
        let ys: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let (_, p2) = ks_two_sample(&xs, &ys).unwrap();
        assert!(p2 > 0.01);
    }

    #[test]
    fn ks_rejects_wrong_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>().powi(2)).collect();
        let (_, p) = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(p < 1e-6, "p={p}");
        let ys: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let (_, p2) = ks_two_sample(&xs, &ys).unwrap();
        assert!(p2 < 1e-6);
    }

    #[test]
    fn binomial_z_centered_and_scaled() {
        // exactly on target
        assert_eq!(binomial_z(500, 1000, 0.5).unwrap(), 0.0);
        // one-sigma displacement
        let z = binomial_z(516, 1000, 0.5).unwrap();
        assert!((z - 16.0 / 250.0f64.sqrt()).abs() < 1e-12);
        assert!(binomial_z(1, 0, 0.5).is_err());
        assert!(binomial_z(1, 10, 0.0).is_err());
    }
}
