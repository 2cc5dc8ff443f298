//! Experiment orchestration behind the command-line entry point.
//!
//! The orchestrator itself is single-threaded and deterministic: identical
//! config and seed produce byte-identical CSV and JSON artifacts. Grid-level
//! parallelism lives inside the numerical modules.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{NormsSection, RunConfig};
use crate::model::{diagnostics, to_state, ComplexUnknown};
use crate::normal_form::{profile_of, w_profile, w_rhs_bilinear, w_rhs_cubic};
use crate::norms::{
    energy_sigma, linf_observables, sobolev_norm, y_norm, z_norm, z_prime_norm, NormReport,
};
use crate::report::{read_csv, write_csv, write_summary, RunSummary};
use crate::stepper::run;
use crate::verify::{
    dispersive_decay_check, energy_growth_monitor, fit_decay, linear_profile_constancy,
    multiplier_y_boundedness_check, nonlinear_decay_experiment, w_equation_residual,
    z_to_zprime_decay_check, DecayFit,
};
use crate::{Error, Result};

/// Evaluate every monitored norm, energy, and diagnostic of U at time t.
pub fn norm_report(u: &ComplexUnknown, t: f64, norms: &NormsSection) -> Result<NormReport> {
    let s = to_state(u, t)?;
    let f = u.field();
    let mut h_norms = BTreeMap::new();
    for k in [3, norms.n0, norms.n] {
        h_norms.entry(k).or_insert_with(|| sobolev_norm(f, k));
    }
    let z = z_norm(f);
    let y = z + h_norms[&norms.n0];
    let prof = profile_of(f, t);
    let y_profile = Some(y_norm(&prof, norms.n0));
    let (linf_density, linf_gradv) = linf_observables(&s);
    let mut e_sigma = BTreeMap::new();
    for &sigma in &norms.sigma_list {
        e_sigma.insert(sigma, energy_sigma(u, sigma)?);
    }
    Ok(NormReport {
        time: t,
        h_norms,
        z_norm: z,
        z_prime: z_prime_norm(f),
        y_norm: y,
        y_profile,
        linf_density,
        linf_gradv,
        e_sigma,
        e_physical: crate::model::conserved_energy(&s),
        diagnostics: diagnostics(&s),
    })
}

pub struct SimulateArtifacts {
    pub history: Vec<NormReport>,
    pub summary: RunSummary,
}

/// Integrate the configured run, recording a norm report at every sample and
/// writing the configured artifacts (CSV, field dumps, JSON summary, SVG).
pub fn simulate(cfg: &RunConfig) -> Result<SimulateArtifacts> {
    cfg.validate()?;
    for p in [&cfg.output.csv, &cfg.output.report, &cfg.output.svg]
        .into_iter()
        .flatten()
    {
        if let Some(parent) = p.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
    }
    let hash = cfg.hash()?;
    let u0 = cfg.initial_unknown()?;
    let equilibrium = u0.field().l2_norm() == 0.0;
    let scfg = cfg.stepper_config()?;
    let dump_prefix = cfg
        .output
        .csv
        .as_ref()
        .map(|p| p.with_extension(""))
        .unwrap_or_else(|| "ep2d_state".into());

    let mut history: Vec<NormReport> = Vec::new();
    let (_, traj) = run(&u0, &scfg, |u, t| {
        history.push(norm_report(u, t, &cfg.norms)?);
        if cfg.output.fields_every > 0 {
            let step = (t / scfg.dt).round() as usize;
            if step % cfg.output.fields_every == 0 {
                let path = format!("{}_step{:06}.ep2d", dump_prefix.display(), step);
                crate::io::write_field(Path::new(&path), u.field())?;
            }
        }
        Ok(())
    })?;

    if let Some(csv) = &cfg.output.csv {
        write_csv(csv, &hash, &history)?;
    }

    let energies: Vec<f64> = history.iter().map(|r| r.e_physical).collect();
    let (emin, emax) = energies
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    let energy_drift = if equilibrium {
        Some(0.0)
    } else {
        Some((emax - emin) / emax.abs().max(f64::MIN_POSITIVE))
    };

    let (minimal_c, delta_eff) = if equilibrium || history.len() < 2 {
        (None, None)
    } else {
        let sigma = cfg.norms.sigma_list.first().copied().unwrap_or(3);
        let g = energy_growth_monitor(&history, sigma)?;
        (Some(g.minimal_c), Some(g.delta_eff))
    };

    // decay fits over t in [5, horizon]; skipped when the window or the data
    // cannot support a fit
    let (density_fit, gradv_fit) = if equilibrium {
        (None, None)
    } else {
        let keep: Vec<&NormReport> = history.iter().filter(|r| r.time >= 5.0).collect();
        let ts: Vec<f64> = keep.iter().map(|r| r.time).collect();
        let dens: Vec<f64> = keep.iter().map(|r| r.linf_density).collect();
        let grads: Vec<f64> = keep.iter().map(|r| r.linf_gradv).collect();
        (
            fit_decay("linf_density", &ts, &dens).ok(),
            fit_decay("linf_gradv", &ts, &grads).ok(),
        )
    };

    let profile_y_deviation = if scfg.linear_only {
        let y0 = history[0].y_profile.unwrap_or(0.0);
        Some(
            history
                .iter()
                .filter_map(|r| r.y_profile)
                .map(|y| (y - y0).abs())
                .fold(0.0f64, f64::max)
                / y0.max(f64::MIN_POSITIVE),
        )
    } else {
        None
    };

    let summary = RunSummary {
        config_hash: hash,
        final_time: traj.final_time,
        steps: traj.steps,
        samples: traj.samples,
        equilibrium,
        wraparound_warning: traj.wraparound_warning,
        energy_drift,
        minimal_c,
        delta_eff,
        density_fit,
        gradv_fit,
        profile_y_deviation,
        max_neutrality_residual: history
            .iter()
            .map(|r| r.diagnostics.neutrality_residual)
            .fold(0.0, f64::max),
        max_curl_residual: history
            .iter()
            .map(|r| r.diagnostics.curl_residual)
            .fold(0.0, f64::max),
        min_density: history
            .iter()
            .map(|r| r.diagnostics.min_density)
            .fold(f64::INFINITY, f64::min),
    };

    if let Some(path) = &cfg.output.report {
        write_summary(path, &summary)?;
    }
    if let Some(path) = &cfg.output.svg {
        let curves: [(&str, fn(&NormReport) -> f64); 3] = [
            ("|n - 1|_inf", |r| r.linf_density),
            ("|grad v|_inf", |r| r.linf_gradv),
            ("Z'", |r| r.z_prime),
        ];
        let series: Vec<crate::svg::Series> = curves
            .iter()
            .map(|(name, get)| crate::svg::Series {
                name: name.to_string(),
                points: history.iter().map(|r| (r.time, get(r))).collect(),
            })
            .collect();
        // fall back to a linear axis when nothing is positive (equilibrium runs)
        let log_y = series.iter().any(|s| s.points.iter().any(|&(_, y)| y > 0.0));
        crate::svg::write_line_chart(path, "run observables", "t", "value", &series, log_y)?;
    }

    Ok(SimulateArtifacts { history, summary })
}

pub const AVAILABLE_CHECKS: &[&str] = &[
    "phase_bounds",
    "dispersive_decay",
    "zprime_decay",
    "multiplier_bounds",
    "energy_growth",
    "nonlinear_decay",
    "normal_form",
    "linear_profile",
    "ledger",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub note: String,
    pub measured: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config_hash: String,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn outcome(name: &str, pass: bool, note: impl Into<String>, measured: serde_json::Value) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        pass,
        note: note.into(),
        measured,
    }
}

/// Decade-spanning sample times inside the wraparound-valid window.
fn decay_window(grid: &crate::grid::Grid) -> Vec<f64> {
    let t1 = (0.95 * grid.wraparound_horizon()).max(1.5);
    let n = 60;
    (0..=n)
        .map(|i| 1.0 + (t1 - 1.0) * i as f64 / n as f64)
        .collect()
}

fn run_check(cfg: &RunConfig, name: &str) -> Result<CheckOutcome> {
    let g = cfg.grid()?;
    match name {
        "phase_bounds" => {
            let rep = crate::dispersion::certify_phase_bounds(
                cfg.model.a,
                cfg.model.b,
                200_000,
                cfg.seed,
                20.0,
            )?;
            Ok(outcome(
                name,
                rep.pass,
                "sampled phase-inequality ratios against frozen budgets",
                json(&rep),
            ))
        }
        "dispersive_decay" => {
            let w = 2.0;
            let f = crate::field::SpectralField::from_fn_physical(&g, |x| {
                Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / (2.0 * w * w)).exp(), 0.0)
            });
            let fit = dispersive_decay_check(0, &f, &decay_window(&g))?;
            let pass = (-1.15..=-0.85).contains(&fit.exponent);
            Ok(outcome(
                name,
                pass,
                "band-0 linear decay exponent must lie in [-1.15, -0.85]",
                json(&fit),
            ))
        }
        "zprime_decay" => {
            let w = 2.0;
            let f = crate::field::SpectralField::from_fn_physical(&g, |x| {
                Complex64::new((-(x[0] * x[0] + x[1] * x[1]) / (2.0 * w * w)).exp(), 0.0)
            })
            .to_frequency();
            let fit = z_to_zprime_decay_check(&f, &decay_window(&g))?;
            let pass = fit.exponent <= -0.85;
            Ok(outcome(
                name,
                pass,
                "Z' decay exponent of the propagated Gaussian must be <= -0.85",
                json(&fit),
            ))
        }
        "multiplier_bounds" => {
            // frozen baseline setting: 32^2 grid, L = 16, Y^5, 4 fields
            let gb = crate::grid::Grid::new(32, 16.0, cfg.model.a, cfg.model.b)?;
            let one =
                multiplier_y_boundedness_check("identity", |_| Complex64::new(1.0, 0.0), &gb, 5, 4, 41)?;
            let riesz = multiplier_y_boundedness_check(
                "riesz_1",
                |xi| {
                    let r = xi[0].hypot(xi[1]);
                    if r == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(0.0, xi[0] / r)
                    }
                },
                &gb,
                5,
                4,
                41,
            )?;
            let (a, b) = (cfg.model.a, cfg.model.b);
            let smooth = multiplier_y_boundedness_check(
                "lambda_over_one_plus_lambda",
                |xi| {
                    let lam = (a * (xi[0] * xi[0] + xi[1] * xi[1]) + b).sqrt();
                    Complex64::new(lam / (1.0 + lam), 0.0)
                },
                &gb,
                5,
                4,
                41,
            )?;
            let pass = (one.max_ratio - 1.0).abs() < 1e-9
                && riesz.max_ratio < 2.0
                && smooth.max_ratio <= riesz.max_ratio.max(1.0) * 1.1;
            Ok(outcome(
                name,
                pass,
                "Y-norm multiplier ratios: identity = 1, Riesz < 2, smooth symbol within 1.1x",
                json(&vec![one, riesz, smooth]),
            ))
        }
        "energy_growth" => {
            let arts = simulate(&strip_outputs(cfg))?;
            if arts.summary.equilibrium {
                return Ok(outcome(name, true, "equilibrium run, energy identically zero", json(&arts.summary)));
            }
            let sigma = cfg.norms.sigma_list.first().copied().unwrap_or(3);
            let rep = energy_growth_monitor(&arts.history, sigma)?;
            let pass = rep.delta_eff <= 0.05;
            Ok(outcome(
                name,
                pass,
                "effective energy growth exponent must be <= 0.05",
                json(&rep),
            ))
        }
        "nonlinear_decay" => {
            let u0 = cfg.initial_unknown()?;
            let rep = nonlinear_decay_experiment(&u0, &cfg.stepper_config()?, 5.0)?;
            if rep.trivial {
                return Ok(outcome(name, true, "observables identically zero, fit skipped", json(&rep)));
            }
            let in_band = |f: &Option<DecayFit>| {
                f.as_ref()
                    .map(|d| (-1.25..=-0.75).contains(&d.exponent))
                    .unwrap_or(false)
            };
            let pass = !rep.shock_adjacent && in_band(&rep.density_fit) && in_band(&rep.gradv_fit);
            Ok(outcome(
                name,
                pass,
                "both pointwise decay exponents must lie in [-1.25, -0.75]",
                json(&rep),
            ))
        }
        "normal_form" => {
            let u0 = cfg.initial_unknown()?;
            let scfg = cfg.stepper_config()?;
            let u1 = crate::stepper::step(&u0, &scfg)?;
            let u2 = crate::stepper::step(&u1, &scfg)?;
            let modes: Vec<[i64; 2]> = vec![[1, 0], [0, 1], [1, 1], [2, 0], [2, 1]];
            let (res, scale) = w_equation_residual(&u0, &u1, &u2, scfg.dt, scfg.dt, &modes)?;
            let max_res = res.iter().fold(0.0f64, |a, &b| a.max(b));
            let pass = scale == 0.0 || max_res <= 0.25 * scale;
            Ok(outcome(
                name,
                pass,
                "finite-difference profile derivative vs cubic right-hand side",
                json(&serde_json::json!({"residuals": res, "scale": scale})),
            ))
        }
        "linear_profile" => {
            let u0 = cfg.initial_unknown()?;
            let dev = linear_profile_constancy(&u0, &cfg.stepper_config()?, cfg.norms.n0)?;
            Ok(outcome(
                name,
                dev <= 1e-8,
                "profile Y norm must be constant along the linear flow",
                json(&dev),
            ))
        }
        "ledger" => {
            let rep = crate::ledger::ledger_check(Path::new("ledger.toml"))?;
            Ok(outcome(name, rep.pass(), "claim ledger consistency", json(&rep)))
        }
        other => Err(Error::InvalidInput(format!(
            "unknown check '{other}'; available: {}",
            AVAILABLE_CHECKS.join(", ")
        ))),
    }
}

fn strip_outputs(cfg: &RunConfig) -> RunConfig {
    let mut c = cfg.clone();
    c.output = Default::default();
    c
}

/// Run the named checks (all of them when the selection is empty) and
/// aggregate one JSON report. A check that errors is recorded as failed.
pub fn verify(cfg: &RunConfig, names: &[String]) -> Result<VerifyReport> {
    let selected: Vec<String> = if names.is_empty() {
        AVAILABLE_CHECKS.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    for n in &selected {
        if !AVAILABLE_CHECKS.contains(&n.as_str()) {
            return Err(Error::InvalidInput(format!(
                "unknown check '{n}'; available: {}",
                AVAILABLE_CHECKS.join(", ")
            )));
        }
    }
    let mut checks = Vec::new();
    for n in &selected {
        let c = match run_check(cfg, n) {
            Ok(c) => c,
            Err(e) => outcome(n, false, format!("check aborted: {e}"), serde_json::Value::Null),
        };
        checks.push(c);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        config_hash: cfg.hash()?,
        checks,
        pass,
    })
}

/// Per-frequency corrected-profile output for a field dump: the value of
/// What(xi), the bilinear and cubic right-hand sides, and their residual.
pub fn normalform(dump: &Path, freqs: &[[i64; 2]], t: f64, out_csv: &Path) -> Result<()> {
    let f = crate::io::read_field(dump)?;
    let g = f.grid().clone();
    let u = ComplexUnknown::new(f)?;
    let max_mode = (g.n() / 2 - 1) as i64;
    for k in freqs {
        if g.index_of_mode(k[0]).is_none() || g.index_of_mode(k[1]).is_none() {
            let clamp = |v: i64| v.clamp(-(max_mode), max_mode);
            return Err(Error::InvalidInput(format!(
                "frequency ({}, {}) is off-lattice for n = {}; nearest on-lattice mode is ({}, {})",
                k[0],
                k[1],
                g.n(),
                clamp(k[0]),
                clamp(k[1])
            )));
        }
    }
    let w = w_profile(&u, t, freqs)?;
    let rb = w_rhs_bilinear(&u, t, freqs)?;
    let rc = w_rhs_cubic(&u, t, freqs)?;
    let mut out = String::from("k1,k2,w_re,w_im,rhs_bilinear_re,rhs_bilinear_im,rhs_cubic_re,rhs_cubic_im,residual\n");
    for (i, k) in freqs.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            k[0],
            k[1],
            w[i].re,
            w[i].im,
            rb[i].re,
            rb[i].im,
            rc[i].re,
            rc[i].im,
            (rb[i] - rc[i]).norm()
        ));
    }
    std::fs::write(out_csv, out)?;
    Ok(())
}

/// One-shot norm evaluation of a field dump interpreted as the unknown U.
pub fn norms_of_dump(dump: &Path, t: f64, norms: &NormsSection) -> Result<NormReport> {
    let f = crate::io::read_field(dump)?;
    let u = ComplexUnknown::new(f)?;
    norm_report(&u, t, norms)
}

/// Re-fit a decay exponent from an existing norm CSV column over [t0, t1].
pub fn decay_fit_csv(csv: &Path, column: &str, t0: f64, t1: f64) -> Result<DecayFit> {
    let table = read_csv(csv)?;
    let times = table.column("time")?;
    let vals = table.column(column)?;
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (t, v) in times.iter().zip(vals.iter()) {
        if let (Some(t), Some(v)) = (t, v) {
            if *t >= t0 && *t <= t1 {
                ts.push(*t);
                vs.push(*v);
            }
        }
    }
    fit_decay(column, &ts, &vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InitSection;

    fn small_config(dir: &Path) -> RunConfig {
        RunConfig::from_str_toml(&format!(
            r#"
seed = 7

[grid]
n = 32
L = 16.0

[model]
a = 1.0
b = 1.0

[init]
recipe = "gaussian_rho"
amplitude = 1e-3
width = 2.0

[stepper]
dt = 0.05
horizon = 1.0
sample_stride = 5

[output]
csv = "{d}/run.csv"
report = "{d}/summary.json"
svg = "{d}/run.svg"
"#,
            d = dir.display()
        ))
        .unwrap()
    }

    #[test]
    fn simulate_writes_deterministic_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let a1 = simulate(&cfg).unwrap();
        let csv1 = std::fs::read(dir.path().join("run.csv")).unwrap();
        let sum1 = std::fs::read(dir.path().join("summary.json")).unwrap();
        let a2 = simulate(&cfg).unwrap();
        assert_eq!(csv1, std::fs::read(dir.path().join("run.csv")).unwrap());
        assert_eq!(sum1, std::fs::read(dir.path().join("summary.json")).unwrap());
        assert_eq!(a1.history.len(), a2.history.len());
        assert!(!a1.summary.equilibrium);
        assert!(a1.summary.energy_drift.unwrap() < 1e-6);
        let table = read_csv(&dir.path().join("run.csv")).unwrap();
        assert_eq!(table.config_hash.unwrap(), cfg.hash().unwrap());
        assert!(std::fs::read_to_string(dir.path().join("run.svg"))
            .unwrap()
            .starts_with("<svg"));
    }

    #[test]
    fn simulate_equilibrium_and_linear_flags() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small_config(dir.path());
        cfg.init = InitSection::GaussianRho {
            amplitude: 0.0,
            width: 2.0,
        };
        let arts = simulate(&cfg).unwrap();
        assert!(arts.summary.equilibrium);
        assert!(arts.history.iter().all(|r| r.z_norm == 0.0));

        let mut cfg = small_config(dir.path());
        cfg.stepper.linear_only = true;
        let arts = simulate(&cfg).unwrap();
        let dev = arts.summary.profile_y_deviation.unwrap();
        assert!(dev < 1e-10, "linear profile deviation {dev}");
    }

    #[test]
    fn verify_rejects_unknown_check_with_listing() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let err = verify(&cfg, &["bogus".to_string()]).unwrap_err().to_string();
        assert!(err.contains("bogus") && err.contains("phase_bounds"), "{err}");
    }

    #[test]
    fn verify_single_fast_checks() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let rep = verify(
            &cfg,
            &["multiplier_bounds".to_string(), "linear_profile".to_string(), "normal_form".to_string()],
        )
        .unwrap();
        assert_eq!(rep.checks.len(), 3);
        assert!(rep.pass, "{:?}", rep.checks);
    }

    #[test]
    fn normalform_dump_round_trip_and_off_lattice() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let u = cfg.initial_unknown().unwrap();
        let dump = dir.path().join("u.ep2d");
        crate::io::write_field(&dump, u.field()).unwrap();
        let out = dir.path().join("w.csv");
        normalform(&dump, &[[1, 0], [1, 0], [2, 1]], 0.0, &out).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], lines[2], "duplicated frequency gives identical rows");
        let err = normalform(&dump, &[[100, 0]], 0.0, &out).unwrap_err().to_string();
        assert!(err.contains("off-lattice") && err.contains("(15, 0)"), "{err}");
    }

    #[test]
    fn decay_fit_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        let mut text = String::from("time,obs\n");
        for i in 0..200 {
            let t = 1.0 + i as f64 * 0.25;
            text.push_str(&format!("{t},{}\n", 3.0 * (1.0 + t).powf(-1.5)));
        }
        std::fs::write(&p, text).unwrap();
        let fit = decay_fit_csv(&p, "obs", 1.0, 60.0).unwrap();
        assert!((fit.exponent + 1.5).abs() < 1e-10);
    }
}
