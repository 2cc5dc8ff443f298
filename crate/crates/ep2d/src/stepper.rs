//! Integrating-factor RK4 time integration.
//!
//! The evolution in frequency space is d/dt Uhat = L Uhat + Nhat(U) with the
//! diagonal linear part L(xi) = -(i Lambda(xi) + epsilon |xi|^2). The
//! integrating factor E(tau) = e^{tau L} is applied exactly, so the scheme is
//! error-free on the linear flow and retains full fourth order on the
//! nonlinear part:
//!
//!   k1 = N(u),
//!   k2 = N(E(h/2)(u + (h/2) k1)),
//!   k3 = N(E(h/2) u + (h/2) k2),
//!   k4 = N(E(h) u + h E(h/2) k3),
//!   u' = E(h) u + (h/6)(E(h) k1 + 2 E(h/2)(k2 + k3) + k4).
//!
//! The mean mode is pinned to zero after every step and the product is
//! dealiased inside the nonlinearity, so singular multipliers stay
//! well-defined along the whole trajectory.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::SpectralField;
use crate::grid::Grid;
use crate::model::{nonlinearity_physical, ComplexUnknown};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StepperConfig {
    pub dt: f64,
    /// Parabolic regularization strength; 0 selects the target equation.
    pub epsilon: f64,
    pub horizon: f64,
    pub sample_stride: usize,
    /// Drop the nonlinearity; the step is then the exact linear flow.
    pub linear_only: bool,
}

impl StepperConfig {
    pub fn new(dt: f64, epsilon: f64, horizon: f64, sample_stride: usize) -> Result<Self> {
        if !(dt != 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInput(format!("invalid dt {dt}")));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidInput(format!("invalid epsilon {epsilon}")));
        }
        if sample_stride == 0 {
            return Err(Error::InvalidInput("sample_stride must be >= 1".into()));
        }
        Ok(StepperConfig {
            dt,
            epsilon,
            horizon,
            sample_stride,
            linear_only: false,
        })
    }
}

/// Precomputed integrating factors for one (grid, dt, epsilon) combination.
pub struct Integrator {
    e_full: Vec<Complex64>,
    e_half: Vec<Complex64>,
    cfg: StepperConfig,
}

fn linear_factor(g: &Grid, tau: f64, epsilon: f64) -> Vec<Complex64> {
    let a = g.a();
    let b = g.b();
    (0..g.len())
        .map(|idx| {
            let xi = g.xi_flat(idx);
            let r2 = xi[0] * xi[0] + xi[1] * xi[1];
            let lam = (a * r2 + b).sqrt();
            let decay = (-tau * epsilon * r2).exp();
            Complex64::new(0.0, -tau * lam).exp() * decay
        })
        .collect()
}

fn apply_factor(f: &SpectralField, factor: &[Complex64]) -> SpectralField {
    let mut out = f.clone();
    for (v, m) in out.values_mut().iter_mut().zip(factor) {
        *v *= m;
    }
    out
}

impl Integrator {
    pub fn new(g: &Grid, cfg: StepperConfig) -> Self {
        Integrator {
            e_full: linear_factor(g, cfg.dt, cfg.epsilon),
            e_half: linear_factor(g, cfg.dt / 2.0, cfg.epsilon),
            cfg,
        }
    }

    fn rhs(&self, f: &SpectralField) -> Result<SpectralField> {
        if self.cfg.linear_only {
            return Ok(SpectralField::zeros(f.grid(), crate::field::Representation::Frequency));
        }
        let mut f = f.clone();
        f.zero_mean();
        let u = ComplexUnknown::new(f)?;
        Ok(nonlinearity_physical(&u))
    }

    /// One IFRK4 step.
    pub fn step(&self, u: &ComplexUnknown) -> Result<ComplexUnknown> {
        let h = self.cfg.dt;
        let uh = u.field();
        let one = Complex64::new(1.0, 0.0);
        let k1 = self.rhs(uh)?;

        let mut s = uh.clone();
        s.add_scaled(Complex64::new(h / 2.0, 0.0), &k1);
        let k2 = self.rhs(&apply_factor(&s, &self.e_half))?;

        let mut s = apply_factor(uh, &self.e_half);
        s.add_scaled(Complex64::new(h / 2.0, 0.0), &k2);
        let k3 = self.rhs(&s)?;

        let mut s = apply_factor(uh, &self.e_full);
        s.add_scaled(Complex64::new(h, 0.0), &apply_factor(&k3, &self.e_half));
        let k4 = self.rhs(&s)?;

        let mut out = apply_factor(uh, &self.e_full);
        let mut incr = apply_factor(&k1, &self.e_full);
        let mut k23 = k2;
        k23.add_scaled(one, &k3);
        incr.add_scaled(Complex64::new(2.0, 0.0), &apply_factor(&k23, &self.e_half));
        incr.add_scaled(one, &k4);
        out.add_scaled(Complex64::new(h / 6.0, 0.0), &incr);
        out.zero_mean();
        if !out.values().iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Verification(
                "non-finite state encountered during time stepping".into(),
            ));
        }
        ComplexUnknown::new(out)
    }
}

/// One IFRK4 step with factors built on the fly.
pub fn step(u: &ComplexUnknown, cfg: &StepperConfig) -> Result<ComplexUnknown> {
    Integrator::new(u.grid(), *cfg).step(u)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub steps: usize,
    pub samples: usize,
    pub final_time: f64,
    /// Set when the requested horizon exceeds the periodic wraparound bound
    /// L / (4 sqrt a); decay observables past that time are unreliable.
    pub wraparound_warning: bool,
}

/// Integrate from U0 to the horizon, invoking the observer at t = 0, every
/// sample_stride steps, and at the final time. Observer errors abort the run
/// and propagate after any partial output has been flushed by the caller.
pub fn run(
    u0: &ComplexUnknown,
    cfg: &StepperConfig,
    mut observer: impl FnMut(&ComplexUnknown, f64) -> Result<()>,
) -> Result<(ComplexUnknown, TrajectorySummary)> {
    if cfg.horizon < 0.0 || !cfg.horizon.is_finite() {
        return Err(Error::InvalidInput(format!("invalid horizon {}", cfg.horizon)));
    }
    let g = u0.grid().clone();
    let integrator = Integrator::new(&g, *cfg);
    let n_steps = (cfg.horizon / cfg.dt).round() as usize;
    let mut u = u0.clone();
    let mut samples = 0;
    observer(&u, 0.0)?;
    samples += 1;
    for s in 1..=n_steps {
        u = integrator.step(&u)?;
        let t = s as f64 * cfg.dt;
        if s % cfg.sample_stride == 0 || s == n_steps {
            observer(&u, t)?;
            samples += 1;
        }
    }
    let summary = TrajectorySummary {
        steps: n_steps,
        samples,
        final_time: n_steps as f64 * cfg.dt,
        wraparound_warning: cfg.horizon > g.wraparound_horizon(),
    };
    Ok((u, summary))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub sigma: u32,
    pub eps: Vec<f64>,
    /// (i, j, sup over matched sample times of the H^sigma distance)
    pub pairwise: Vec<(usize, usize, f64)>,
    /// Least-squares slope of log(distance to the smallest-epsilon run)
    /// against log(eps_i + eps_min).
    pub fitted_order: f64,
}

/// Run U0 under each regularization strength and tabulate pairwise H^sigma
/// distances at matched sample times.
pub fn epsilon_convergence_study(
    u0: &ComplexUnknown,
    eps_list: &[f64],
    cfg: &StepperConfig,
    sigma: u32,
) -> Result<ConvergenceTable> {
    if eps_list.is_empty() {
        return Err(Error::InvalidInput("empty epsilon list".into()));
    }
    for w in eps_list.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::InvalidInput("eps_list must be strictly decreasing".into()));
        }
    }
    if *eps_list.last().unwrap() < 0.0 {
        return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
    }
    let mut trajs: Vec<Vec<SpectralField>> = Vec::new();
    for &eps in eps_list {
        let mut c = *cfg;
        c.epsilon = eps;
        let mut snaps = Vec::new();
        run(u0, &c, |u, _t| {
            snaps.push(u.field().clone());
            Ok(())
        })?;
        trajs.push(snaps);
    }
    let dist = |a: &[SpectralField], b: &[SpectralField]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| crate::norms::sobolev_norm(&x.sub(y), sigma))
            .fold(0.0, f64::max)
    };
    let mut pairwise = Vec::new();
    for i in 0..eps_list.len() {
        for j in (i + 1)..eps_list.len() {
            pairwise.push((i, j, dist(&trajs[i], &trajs[j])));
        }
    }
    // fit against the smallest-epsilon run as reference
    let last = eps_list.len() - 1;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(i, j, d) in &pairwise {
        if j == last && d > 0.0 {
            xs.push((eps_list[i] + eps_list[last]).ln());
            ys.push(d.ln());
        }
    }
    let fitted_order = if xs.len() >= 2 {
        least_squares_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    Ok(ConvergenceTable {
        sigma,
        eps: eps_list.to_vec(),
        pairwise,
        fitted_order,
    })
}

/// Slope of the least-squares line through (xs, ys).
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::propagate_linear;
    use crate::field::Representation;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn small_unknown(n: usize, l: f64, band: i64, amp: f64, seed: u64) -> ComplexUnknown {
        let g = Grid::new(n, l, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpectralField::zeros(&g, Representation::Frequency);
        for i in 0..n {
            for j in 0..n {
                if g.mode(i).abs() <= band && g.mode(j).abs() <= band && (i, j) != (0, 0) {
                    f.values_mut()[i * n + j] =
                        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * amp;
                }
            }
        }
        f.dealias();
        ComplexUnknown::new(f).unwrap()
    }

    #[test]
    fn linear_only_step_is_exact_propagator() {
        let u = small_unknown(32, 16.0, 6, 0.1, 1);
        let mut cfg = StepperConfig::new(0.37, 0.0, 1.0, 1).unwrap();
        cfg.linear_only = true;
        let stepped = step(&u, &cfg).unwrap();
        let exact = propagate_linear(u.field(), 0.37, 1);
        let err = stepped.field().sub(&exact).l2_norm() / exact.l2_norm();
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn heat_factor_exact_decay() {
        let u = small_unknown(32, 16.0, 6, 0.1, 2);
        let eps = 0.3;
        let dt = 0.5;
        let mut cfg = StepperConfig::new(dt, eps, 1.0, 1).unwrap();
        cfg.linear_only = true;
        let stepped = step(&u, &cfg).unwrap();
        let g = u.grid().clone();
        for (idx, (v, w)) in u
            .field()
            .values()
            .iter()
            .zip(stepped.field().values())
            .enumerate()
        {
            let xi = g.xi_flat(idx);
            let r2 = xi[0] * xi[0] + xi[1] * xi[1];
            let expect = v.norm() * (-dt * eps * r2).exp();
            assert!((w.norm() - expect).abs() < 1e-13 * expect.max(1e-13));
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let u = ComplexUnknown::new(SpectralField::zeros(&g, Representation::Frequency)).unwrap();
        let cfg = StepperConfig::new(0.1, 0.0, 2.0, 5).unwrap();
        let (uf, summary) = run(&u, &cfg, |s, _| {
            assert_eq!(s.field().l2_norm(), 0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(uf.field().l2_norm(), 0.0);
        assert_eq!(summary.steps, 20);
    }

    #[test]
    fn dt_halving_fourth_order() {
        let u = small_unknown(32, 16.0, 4, 0.05, 3);
        let horizon = 0.8;
        let err_at = |dt: f64| {
            let cfg = StepperConfig::new(dt, 0.0, horizon, usize::MAX).unwrap();
            let (uf, _) = run(&u, &cfg, |_, _| Ok(())).unwrap();
            uf
        };
        let coarse = err_at(0.2);
        let mid = err_at(0.1);
        let fine = err_at(0.05);
        let e1 = coarse.field().sub(mid.field()).l2_norm();
        let e2 = mid.field().sub(fine.field()).l2_norm();
        let ratio = e1 / e2;
        assert!((11.0..=22.0).contains(&ratio), "dt-halving ratio {ratio}");
    }

    #[test]
    fn neutrality_preserved_and_reversible() {
        let u = small_unknown(32, 16.0, 4, 0.05, 4);
        let cfg = StepperConfig::new(0.05, 0.0, 1.0, 1).unwrap();
        let (fwd, _) = run(&u, &cfg, |s, _| {
            assert!(s.field().mean_mode().norm() == 0.0);
            Ok(())
        })
        .unwrap();
        let back_cfg = StepperConfig::new(-0.05, 0.0, 1.0, 1).unwrap();
        let integ = Integrator::new(u.grid(), back_cfg);
        let mut v = fwd;
        for _ in 0..20 {
            v = integ.step(&v).unwrap();
        }
        let err = v.field().sub(u.field()).l2_norm() / u.field().l2_norm();
        assert!(err < 1e-9, "round trip defect {err}");
    }

    #[test]
    fn linear_run_profile_frozen() {
        let u = small_unknown(32, 16.0, 6, 0.1, 5);
        let mut cfg = StepperConfig::new(0.1, 0.0, 3.0, 5).unwrap();
        cfg.linear_only = true;
        let y0 = crate::norms::y_norm(u.field(), 5);
        run(&u, &cfg, |s, t| {
            let v = crate::normal_form::profile_of(s.field(), t);
            let y = crate::norms::y_norm(&v, 5);
            assert!((y - y0).abs() < 1e-10 * y0, "t = {t}: {y} vs {y0}");
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn wraparound_warning_set() {
        let u = small_unknown(16, 8.0, 2, 0.01, 6);
        // wraparound horizon is L / 4 = 2
        let cfg = StepperConfig::new(0.5, 0.0, 4.0, 100).unwrap();
        let (_, summary) = run(&u, &cfg, |_, _| Ok(())).unwrap();
        assert!(summary.wraparound_warning);
    }

    #[test]
    fn epsilon_study_identical_and_slope() {
        let u = small_unknown(16, 8.0, 2, 0.02, 7);
        let cfg = StepperConfig::new(0.05, 0.0, 0.5, 2).unwrap();
        let t = epsilon_convergence_study(&u, &[1e-2, 1e-3, 1e-4], &cfg, 3).unwrap();
        for &(_, _, d) in &t.pairwise {
            assert!(d > 0.0);
        }
        assert!(t.fitted_order > 0.4, "slope {}", t.fitted_order);
        assert!(epsilon_convergence_study(&u, &[1e-3, 1e-2], &cfg, 3).is_err());
    }
}
