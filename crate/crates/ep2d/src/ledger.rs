//! Claim ledger: a structured map from each mathematical claim or formula
//! implemented by this crate to its operation and covering tests, checked
//! mechanically against the registered operation catalog.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Every public operation a ledger entry may reference.
pub const OPERATION_CATALOG: &[&str] = &[
    "grid::Grid::new",
    "field::SpectralField::to_frequency",
    "field::SpectralField::to_physical",
    "field::SpectralField::apply_multiplier",
    "field::SpectralField::conj_transform",
    "field::SpectralField::dealias",
    "cutoff::phi",
    "cutoff::lp_project",
    "cutoff::lp_project_interval",
    "cutoff::spatial_ring",
    "io::write_field",
    "io::read_field",
    "dispersion::lambda_eval",
    "dispersion::phase_bilinear",
    "dispersion::phase_trilinear",
    "dispersion::propagate_linear",
    "dispersion::certify_phase_bounds",
    "model::PerturbationState::new",
    "model::to_unknown",
    "model::to_state",
    "model::nonlinearity_physical",
    "model::nonlinearity_spectral",
    "model::conserved_energy",
    "model::diagnostics",
    "norms::sobolev_norm",
    "norms::z_norm",
    "norms::z_prime_norm",
    "norms::y_norm",
    "norms::energy_sigma",
    "norms::linf_observables",
    "norms::x_norm_tracker",
    "normal_form::bilinear_symbol",
    "normal_form::flip_symbol",
    "normal_form::cubic_symbol",
    "normal_form::profile_of",
    "normal_form::w_profile",
    "normal_form::w_rhs_bilinear",
    "normal_form::w_rhs_cubic",
    "stepper::step",
    "stepper::run",
    "stepper::epsilon_convergence_study",
    "verify::fit_decay",
    "verify::dispersive_decay_check",
    "verify::z_to_zprime_decay_check",
    "verify::nonlinear_decay_experiment",
    "verify::energy_growth_monitor",
    "verify::multiplier_y_boundedness_check",
    "verify::w_equation_residual",
    "report::write_csv",
    "report::read_csv",
    "svg::write_line_chart",
    "config::RunConfig::from_path",
    "cli::simulate",
    "cli::verify",
    "cli::normalform",
    "cli::norms",
    "cli::decay_fit",
    "ledger::ledger_check",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerEntry {
    /// Neutral description of the claim, formula, or inequality covered.
    pub anchor: String,
    /// Implementing operation (must be in the catalog), empty if out of scope.
    #[serde(default)]
    pub operation: String,
    #[serde(default)]
    pub tests: Vec<String>,
    /// "implemented" or "out-of-scope".
    pub status: String,
    #[serde(default)]
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ledger {
    pub entry: Vec<LedgerEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerReport {
    pub entries: usize,
    pub implemented: usize,
    pub out_of_scope: usize,
    pub problems: Vec<String>,
}

impl LedgerReport {
    pub fn pass(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn check_ledger(ledger: &Ledger) -> LedgerReport {
    let catalog: HashSet<&str> = OPERATION_CATALOG.iter().copied().collect();
    let mut problems = Vec::new();
    let mut seen = HashSet::new();
    let mut implemented = 0;
    let mut out_of_scope = 0;
    for e in &ledger.entry {
        if e.anchor.trim().is_empty() {
            problems.push("entry with empty anchor".to_string());
            continue;
        }
        if !seen.insert(e.anchor.clone()) {
            problems.push(format!("duplicate anchor '{}'", e.anchor));
        }
        match e.status.as_str() {
            "implemented" => {
                implemented += 1;
                if !catalog.contains(e.operation.as_str()) {
                    problems.push(format!(
                        "anchor '{}' references unknown operation '{}'",
                        e.anchor, e.operation
                    ));
                }
                if e.tests.is_empty() {
                    problems.push(format!("anchor '{}' has no covering tests", e.anchor));
                }
            }
            "out-of-scope" => {
                out_of_scope += 1;
                if e.reason.trim().is_empty() {
                    problems.push(format!(
                        "out-of-scope anchor '{}' has an empty reason",
                        e.anchor
                    ));
                }
            }
            other => problems.push(format!(
                "anchor '{}' has unknown status '{other}'",
                e.anchor
            )),
        }
    }
    LedgerReport {
        entries: ledger.entry.len(),
        implemented,
        out_of_scope,
        problems,
    }
}

pub fn ledger_check(path: &Path) -> Result<LedgerReport> {
    let text = std::fs::read_to_string(path)?;
    let ledger: Ledger =
        toml::from_str(&text).map_err(|e| Error::Format(format!("ledger parse: {e}")))?;
    Ok(check_ledger(&ledger))
}
