//! Density models rho = phi^2 = exp(-2H): the Gaussian example, the wetting
//! (lattice interface) Hamiltonian with convex pair potentials, and a grid
//! verifier for the structural constants (K1, K2, K3).

use std::sync::Arc;

use crate::error::{Result, StickyError};
use crate::scalar::Real;

/// Constants bounding a Hamiltonian: `H >= -K1`, `dH_i <= K2` on the face
/// `{x_i = 0}`, `d^2H_i <= K3` everywhere (on the working box).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Bounds<R> {
    pub k1: R,
    pub k2: R,
    pub k3: R,
}

type VecFn<R> = Arc<dyn Fn(&[R]) -> Vec<R> + Send + Sync>;

/// A density model given through its Hamiltonian `H = -ln(phi)`.
///
/// Only the diagonal of the Hessian is exposed: the weight decomposition
/// needs `sum_i d_i^2 H` and no mixed partials.
#[derive(Clone)]
pub struct DensityModel<R> {
    pub n: usize,
    h: Arc<dyn Fn(&[R]) -> R + Send + Sync>,
    grad_h: VecFn<R>,
    lap_diag_h: VecFn<R>,
    pub bounds: Option<Bounds<R>>,
}

impl<R: Real> std::fmt::Debug for DensityModel<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DensityModel")
            .field("n", &self.n)
            .field("bounds", &self.bounds.map(|b| (b.k1, b.k2, b.k3)))
            .finish()
    }
}

impl<R: Real> DensityModel<R> {
    pub fn from_hamiltonian<H, G, L>(n: usize, h: H, grad_h: G, lap_diag_h: L) -> Self
    where
        H: Fn(&[R]) -> R + Send + Sync + 'static,
        G: Fn(&[R]) -> Vec<R> + Send + Sync + 'static,
        L: Fn(&[R]) -> Vec<R> + Send + Sync + 'static,
    {
        DensityModel {
            n,
            h: Arc::new(h),
            grad_h: Arc::new(grad_h),
            lap_diag_h: Arc::new(lap_diag_h),
            bounds: None,
        }
    }

    pub fn with_bounds(mut self, k1: R, k2: R, k3: R) -> Self {
        self.bounds = Some(Bounds { k1, k2, k3 });
        self
    }

    #[inline]
    pub fn h(&self, x: &[R]) -> R {
        (self.h)(x)
    }

    #[inline]
    pub fn phi(&self, x: &[R]) -> R {
        (-self.h(x)).exp()
    }

    #[inline]
    pub fn rho(&self, x: &[R]) -> R {
        (-R::c(2.0) * self.h(x)).exp()
    }

    #[inline]
    pub fn grad_h(&self, x: &[R]) -> Vec<R> {
        (self.grad_h)(x)
    }

    #[inline]
    pub fn lap_diag_h(&self, x: &[R]) -> Vec<R> {
        (self.lap_diag_h)(x)
    }

    /// Drift `d_i ln(rho) = -2 d_iH`, before any boundary masking.
    pub fn drift(&self, x: &[R]) -> Vec<R> {
        self.grad_h(x).into_iter().map(|g| -R::c(2.0) * g).collect()
    }
}

/// Flat model rho = 1 (H = 0) in n coordinates.
pub fn flat_model<R: Real>(n: usize) -> DensityModel<R> {
    DensityModel::from_hamiltonian(
        n,
        |_: &[R]| R::zero(),
        move |x: &[R]| vec![R::zero(); x.len()],
        move |x: &[R]| vec![R::zero(); x.len()],
    )
    .with_bounds(R::zero(), R::zero(), R::zero())
}

/// Gaussian model `H(x) = |x|^2 / 2` (phi = exp(-|x|^2/2), drift -2x).
pub fn gaussian_model<R: Real>(n: usize) -> Result<DensityModel<R>> {
    if n < 1 {
        return Err(StickyError::domain("gaussian_model", "n must be >= 1"));
    }
    Ok(DensityModel::from_hamiltonian(
        n,
        |x: &[R]| x.iter().map(|&v| v * v).fold(R::zero(), |a, b| a + b) * R::c(0.5),
        |x: &[R]| x.to_vec(),
        |x: &[R]| vec![R::one(); x.len()],
    )
    .with_bounds(R::zero(), R::zero(), R::one()))
}

/// Symmetric convex pair potential with curvature window
/// `c_minus <= V'' <= c_plus` and lower bound `V >= -b`.
#[derive(Clone)]
pub struct PairPotential<R> {
    v: Arc<dyn Fn(R) -> R + Send + Sync>,
    dv: Arc<dyn Fn(R) -> R + Send + Sync>,
    ddv: Arc<dyn Fn(R) -> R + Send + Sync>,
    pub c_minus: R,
    pub c_plus: R,
    pub b: R,
    pub name: &'static str,
}

impl<R: Real> std::fmt::Debug for PairPotential<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PairPotential")
            .field("name", &self.name)
            .field("c_minus", &self.c_minus)
            .field("c_plus", &self.c_plus)
            .field("b", &self.b)
            .finish()
    }
}

impl<R: Real> PairPotential<R> {
    #[inline]
    pub fn v(&self, r: R) -> R {
        (self.v)(r)
    }
    #[inline]
    pub fn dv(&self, r: R) -> R {
        (self.dv)(r)
    }
    #[inline]
    pub fn ddv(&self, r: R) -> R {
        (self.ddv)(r)
    }

    /// `V(r) = r^2 / 2`: c_- = c_+ = 1, b = 0.
    pub fn quadratic() -> Self {
        PairPotential {
            v: Arc::new(|r: R| r * r * R::c(0.5)),
            dv: Arc::new(|r: R| r),
            ddv: Arc::new(|_| R::one()),
            c_minus: R::one(),
            c_plus: R::one(),
            b: R::zero(),
            name: "quadratic",
        }
    }

    /// `V(r) = r^2/2 + eps cos(r)` with `0 < eps < 1`:
    /// c_- = 1 - eps, c_+ = 1 + eps, b = eps.
    pub fn soft_convex(eps: R) -> Result<Self> {
        if !(eps > R::zero() && eps < R::one()) {
            return Err(StickyError::domain(
                "soft_convex",
                format!("eps must be in (0,1), got {eps}"),
            ));
        }
        Ok(PairPotential {
            v: Arc::new(move |r: R| r * r * R::c(0.5) + eps * r.cos()),
            dv: Arc::new(move |r: R| r - eps * r.sin()),
            ddv: Arc::new(move |r: R| R::one() - eps * r.cos()),
            c_minus: R::one() - eps,
            c_plus: R::one() + eps,
            b: eps,
            name: "soft-convex",
        })
    }

    /// Grid check of symmetry, V'(0) = 0, the curvature window and the lower
    /// bound on [-hi, hi].
    pub fn validate(&self, hi: R, points: usize) -> Result<()> {
        let tol = R::c(1e-10);
        if self.dv(R::zero()).abs() > tol {
            return Err(StickyError::domain("PairPotential", "V'(0) != 0"));
        }
        for k in 0..=points {
            let r = hi * (R::c(2.0) * R::c(k as f64) / R::c(points as f64) - R::one());
            if (self.v(r) - self.v(-r)).abs() > tol * (R::one() + self.v(r).abs()) {
                return Err(StickyError::domain(
                    "PairPotential",
                    format!("asymmetric at r = {r}"),
                ));
            }
            let c = self.ddv(r);
            if c < self.c_minus - tol || c > self.c_plus + tol {
                return Err(StickyError::domain(
                    "PairPotential",
                    format!("V''({r}) = {c} outside [{}, {}]", self.c_minus, self.c_plus),
                ));
            }
            if self.v(r) < -self.b - tol {
                return Err(StickyError::domain(
                    "PairPotential",
                    format!("V({r}) below -b"),
                ));
            }
        }
        Ok(())
    }
}

/// Wetting (lattice interface) Hamiltonian over a hard wall:
/// `H(x) = (1/2) sum_{bonds (i,i+1)} V(x_i - x_{i+1})` with `x_0 = x_{n+1} = 0`,
/// so `d_iH = (V'(x_i - x_{i-1}) + V'(x_i - x_{i+1})) / 2` by symmetry of V.
pub fn wetting_model<R: Real>(n: usize, pot: PairPotential<R>) -> Result<DensityModel<R>> {
    if n < 1 {
        return Err(StickyError::domain("wetting_model", "n must be >= 1"));
    }
    pot.validate(R::c(10.0), 200)?;
    let k1 = R::c(n as f64) * pot.b * R::c(0.5);
    let k3 = pot.c_plus;
    let at = move |x: &[R], i: isize| -> R {
        if i < 1 || i as usize > x.len() {
            R::zero()
        } else {
            x[i as usize - 1]
        }
    };
    let p1 = pot.clone();
    let p2 = pot.clone();
    let p3 = pot.clone();
    Ok(DensityModel::from_hamiltonian(
        n,
        move |x: &[R]| {
            let mut s = R::zero();
            for i in 0..=x.len() {
                s += p1.v(at(x, i as isize) - at(x, i as isize + 1));
            }
            // each bond counted once; the 1/2 matches the symmetrized
            // convention where ordered neighbor pairs are double-counted
            s * R::c(0.5)
        },
        move |x: &[R]| {
            (0..x.len())
                .map(|i| {
                    let i = i as isize + 1;
                    (p2.dv(at(x, i) - at(x, i - 1)) + p2.dv(at(x, i) - at(x, i + 1))) * R::c(0.5)
                })
                .collect()
        },
        move |x: &[R]| {
            (0..x.len())
                .map(|i| {
                    let i = i as isize + 1;
                    (p3.ddv(at(x, i) - at(x, i - 1)) + p3.ddv(at(x, i) - at(x, i + 1)))
                        * R::c(0.5)
                })
                .collect()
        },
    )
    .with_bounds(k1, R::zero(), k3))
}

/// Outcome of one grid-scanned condition: worst margin (>= 0 means pass) and
/// the witness point attaining it.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionReport {
    pub name: &'static str,
    pub margin: f64,
    pub witness: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionsReport {
    pub conditions: Vec<ConditionReport>,
    pub pass: bool,
}

/// Scan `[0, hi]^n` on a `resolution^n` grid asserting the three declared
/// bounds; reports the worst margin and witness per condition.
pub fn verify_conditions<R: Real>(
    model: &DensityModel<R>,
    hi: R,
    resolution: usize,
) -> Result<ConditionsReport> {
    let bounds = model.bounds.ok_or_else(|| {
        StickyError::domain("verify_conditions", "model declares no bounds")
    })?;
    let n = model.n;
    if resolution < 2 || n > 6 {
        return Err(StickyError::domain(
            "verify_conditions",
            "need resolution >= 2 and n <= 6 for the grid scan",
        ));
    }
    let node = |k: usize| hi * R::c(k as f64) / R::c((resolution - 1) as f64);
    let mut h_margin = (f64::INFINITY, vec![]);
    let mut face_margin = (f64::INFINITY, vec![]);
    let mut curv_margin = (f64::INFINITY, vec![]);
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<R> = idx.iter().map(|&k| node(k)).collect();
        let xf: Vec<f64> = x.iter().map(|v| v.f64()).collect();
        let h = model.h(&x);
        if !h.is_finite() {
            return Err(StickyError::NonFinite {
                op: "verify_conditions",
                state: xf,
            });
        }
        let m = (h + bounds.k1).f64();
        if m < h_margin.0 {
            h_margin = (m, xf.clone());
        }
        let grad = model.grad_h(&x);
        for (i, &g) in grad.iter().enumerate() {
            if x[i] == R::zero() {
                let m = (bounds.k2 - g).f64();
                if m < face_margin.0 {
                    face_margin = (m, xf.clone());
                }
            }
        }
        for &l in &model.lap_diag_h(&x) {
            let m = (bounds.k3 - l).f64();
            if m < curv_margin.0 {
                curv_margin = (m, xf.clone());
            }
        }
        let mut d = 0;
        loop {
            if d == n {
                let mk = |name, (margin, witness): (f64, Vec<f64>)| ConditionReport {
                    name,
                    margin,
                    witness,
                    pass: margin >= 0.0,
                };
                let conditions = vec![
                    mk("H >= -K1", h_margin),
                    mk("dH_i <= K2 on {x_i = 0}", face_margin),
                    mk("d2H_i <= K3", curv_margin),
                ];
                let pass = conditions.iter().all(|c| c.pass);
                return Ok(ConditionsReport { conditions, pass });
            }
            idx[d] += 1;
            if idx[d] < resolution {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad(model: &DensityModel<f64>, x: &[f64]) -> Vec<f64> {
        let h = 1e-5;
        (0..x.len())
            .map(|i| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                (model.h(&xp) - model.h(&xm)) / (2.0 * h)
            })
            .collect()
    }

    fn fd_lap_diag(model: &DensityModel<f64>, x: &[f64]) -> Vec<f64> {
        let h = 1e-4;
        (0..x.len())
            .map(|i| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                (model.h(&xp) - 2.0 * model.h(x) + model.h(&xm)) / (h * h)
            })
            .collect()
    }

    fn rand_points(n: usize, count: usize) -> Vec<Vec<f64>> {
        // deterministic pseudo-random grid; no RNG dependency needed here
        let mut s = 0x9e3779b97f4a7c15u64;
        (0..count)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        5.0 * (s >> 11) as f64 / (1u64 << 53) as f64
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn gaussian_drift_and_values() {
        let m = gaussian_model::<f64>(2).unwrap();
        assert_eq!(m.drift(&[2.0, 0.0]), vec![-4.0, 0.0]);
        assert_eq!(m.h(&[0.0, 0.0]), 0.0);
        assert_eq!(m.phi(&[0.0, 0.0]), 1.0);
        assert!((m.rho(&[1.0, 0.0]) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_gradient_matches_finite_differences() {
        let m = gaussian_model::<f64>(3).unwrap();
        for x in rand_points(3, 100) {
            let g = m.grad_h(&x);
            let fd = fd_grad(&m, &x);
            for i in 0..3 {
                assert!((g[i] - fd[i]).abs() < 1e-8, "at {x:?}: {g:?} vs {fd:?}");
            }
        }
    }

    #[test]
    fn wetting_n1_reduces_to_v() {
        for pot in [
            PairPotential::<f64>::quadratic(),
            PairPotential::soft_convex(0.3).unwrap(),
        ] {
            let m = wetting_model(1, pot.clone()).unwrap();
            for x in [0.0, 0.7, 2.5] {
                assert!((m.h(&[x]) - pot.v(x)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn wetting_quadratic_hand_value() {
        let m = wetting_model(2, PairPotential::<f64>::quadratic()).unwrap();
        assert!((m.h(&[1.0, 1.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wetting_derivatives_match_finite_differences() {
        let m = wetting_model(3, PairPotential::<f64>::soft_convex(0.4).unwrap()).unwrap();
        for x in rand_points(3, 100) {
            let g = m.grad_h(&x);
            let fd = fd_grad(&m, &x);
            for i in 0..3 {
                let scale = 1.0 + fd[i].abs();
                assert!((g[i] - fd[i]).abs() / scale < 1e-7, "grad at {x:?}");
            }
            let l = m.lap_diag_h(&x);
            let fdl = fd_lap_diag(&m, &x);
            for i in 0..3 {
                assert!((l[i] - fdl[i]).abs() < 1e-5, "lap at {x:?}: {l:?} vs {fdl:?}");
            }
        }
    }

    #[test]
    fn wetting_boundary_gradient_nonpositive() {
        // dH_i <= 0 whenever x_i = 0
        let m = wetting_model(3, PairPotential::<f64>::quadratic()).unwrap();
        for mut x in rand_points(3, 50) {
            for i in 0..3 {
                let saved = x[i];
                x[i] = 0.0;
                let g = m.grad_h(&x);
                assert!(g[i] <= 1e-12, "dH_{i} = {} > 0 at {x:?}", g[i]);
                x[i] = saved;
            }
        }
    }

    #[test]
    fn drift_is_minus_two_grad() {
        let m = wetting_model(2, PairPotential::<f64>::quadratic()).unwrap();
        let x = [0.5, 1.5];
        let d = m.drift(&x);
        let g = m.grad_h(&x);
        for i in 0..2 {
            assert_eq!(d[i], -2.0 * g[i]);
        }
    }

    #[test]
    fn verify_conditions_passes_for_presets() {
        let r = verify_conditions(&gaussian_model::<f64>(2).unwrap(), 3.0, 9).unwrap();
        assert!(r.pass, "{r:?}");
        let r =
            verify_conditions(&wetting_model(2, PairPotential::<f64>::quadratic()).unwrap(), 3.0, 9)
                .unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_conditions(
            &wetting_model(3, PairPotential::<f64>::soft_convex(0.2).unwrap()).unwrap(),
            3.0,
            5,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn verify_conditions_catches_violation() {
        // H = -x^3 on [0,2]: d2H = -6x <= K3 holds, but H >= -K1 fails near x=2
        let bad = DensityModel::from_hamiltonian(
            1,
            |x: &[f64]| -x[0].powi(3),
            |x| vec![-3.0 * x[0] * x[0]],
            |x| vec![-6.0 * x[0]],
        )
        .with_bounds(1.0, 0.0, 0.0);
        let r = verify_conditions(&bad, 2.0, 21).unwrap();
        assert!(!r.pass);
        let h_cond = &r.conditions[0];
        assert!(!h_cond.pass && (h_cond.witness[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_potential_rejected() {
        let bad = PairPotential {
            v: Arc::new(|r: f64| r * r / 2.0 + 0.1 * r),
            dv: Arc::new(|r: f64| r + 0.1),
            ddv: Arc::new(|_| 1.0),
            c_minus: 1.0,
            c_plus: 1.0,
            b: 0.1,
            name: "tilted",
        };
        assert!(wetting_model(2, bad).is_err());
        assert!(PairPotential::<f64>::soft_convex(1.5).is_err());
    }
}
