//! Norm-report CSV emission and parsing, plus the JSON run summary.
//!
//! The CSV starts with a `# config <sha256>` comment binding the data to the
//! exact configuration that produced it, then a fixed-order header. Floats
//! are written with shortest round-trip formatting, so identical runs produce
//! byte-identical files.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::norms::NormReport;
use crate::verify::DecayFit;
use crate::{Error, Result};

pub const CSV_VERSION: u32 = 1;

fn columns(first: &NormReport) -> Vec<String> {
    let mut cols = vec!["time".to_string()];
    for k in first.h_norms.keys() {
        cols.push(format!("h_{k}"));
    }
    cols.extend(
        ["z", "z_prime", "y", "y_profile", "linf_density", "linf_gradv"]
            .iter()
            .map(|s| s.to_string()),
    );
    for k in first.e_sigma.keys() {
        cols.push(format!("e_{k}"));
    }
    cols.extend(
        ["e_physical", "neutrality_residual", "curl_residual", "min_density"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols
}

fn row_values(r: &NormReport) -> Vec<Option<f64>> {
    let mut vals = vec![Some(r.time)];
    vals.extend(r.h_norms.values().map(|&v| Some(v)));
    vals.push(Some(r.z_norm));
    vals.push(Some(r.z_prime));
    vals.push(Some(r.y_norm));
    vals.push(r.y_profile);
    vals.push(Some(r.linf_density));
    vals.push(Some(r.linf_gradv));
    vals.extend(r.e_sigma.values().map(|&v| Some(v)));
    vals.push(Some(r.e_physical));
    vals.push(Some(r.diagnostics.neutrality_residual));
    vals.push(Some(r.diagnostics.curl_residual));
    vals.push(Some(r.diagnostics.min_density));
    vals
}

/// Write the report series as CSV with the config hash in a leading comment.
pub fn write_csv(path: &Path, config_hash: &str, reports: &[NormReport]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# config {config_hash} v{CSV_VERSION}")?;
    let first = reports.first().ok_or_else(|| {
        Error::InvalidInput("refusing to write an empty norm report series".into())
    })?;
    writeln!(w, "{}", columns(first).join(","))?;
    for r in reports {
        let cells: Vec<String> = row_values(r)
            .iter()
            .map(|v| match v {
                Some(x) => format!("{x}"),
                None => String::new(),
            })
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Parsed CSV: header names, numeric rows (empty cells as None), and the
/// config hash from the leading comment when present.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub config_hash: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let idx = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "no column '{name}'; available: {}",
                    self.header.join(", ")
                ))
            })?;
        Ok(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let text = std::fs::read_to_string(path)?;
    let mut config_hash = None;
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# config ") {
            config_hash = Some(rest.split_whitespace().next().unwrap_or("").to_string());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if header.is_empty() {
            header = line.split(',').map(|s| s.to_string()).collect();
            continue;
        }
        let row: Vec<Option<f64>> = line
            .split(',')
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse::<f64>().map(Some).map_err(|e| {
                        Error::Format(format!("bad numeric cell '{c}': {e}"))
                    })
                }
            })
            .collect::<Result<_>>()?;
        if row.len() != header.len() {
            return Err(Error::Format(format!(
                "row width {} does not match header width {}",
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    if header.is_empty() {
        return Err(Error::Format("CSV has no header".into()));
    }
    Ok(CsvTable {
        config_hash,
        header,
        rows,
    })
}

/// Final JSON summary of a simulate run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub config_hash: String,
    pub final_time: f64,
    pub steps: usize,
    pub samples: usize,
    pub equilibrium: bool,
    pub wraparound_warning: bool,
    /// Relative drift of the conserved physical energy over the run.
    pub energy_drift: Option<f64>,
    pub minimal_c: Option<f64>,
    pub delta_eff: Option<f64>,
    pub density_fit: Option<DecayFit>,
    pub gradv_fit: Option<DecayFit>,
    /// Linear-only runs: relative deviation of the profile Y norm.
    pub profile_y_deviation: Option<f64>,
    pub max_neutrality_residual: f64,
    pub max_curl_residual: f64,
    pub min_density: f64,
}

pub fn write_summary(path: &Path, summary: &RunSummary) -> Result<()> {
    let text = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::Format(format!("summary serialize: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
