//! Run configuration: TOML-first with JSON equivalents, validated against the
//! grid invariants, and hashed for provenance headers in CSV output.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::{Representation, SpectralField};
use crate::grid::Grid;
use crate::model::{to_unknown, ComplexUnknown, PerturbationState};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSection {
    pub a: f64,
    pub b: f64,
}

/// Initial data recipes. Amplitudes are physical-space peak values; widths
/// are Gaussian standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case")]
pub enum InitSection {
    /// Mean-removed Gaussian density bump, h = 0.
    GaussianRho { amplitude: f64, width: f64 },
    /// Gaussian velocity potential, rho = 0.
    GaussianH { amplitude: f64, width: f64 },
    /// Conjugate mode pair in the density at +-k.
    ModePair { k_vector: [i64; 2], amplitude: f64 },
    /// Complex unknown U read from a field dump.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepperSection {
    pub dt: f64,
    #[serde(default)]
    pub epsilon: f64,
    pub horizon: f64,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
    #[serde(default)]
    pub linear_only: bool,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormsSection {
    #[serde(rename = "N", default = "default_n")]
    pub n: u32,
    #[serde(rename = "N0", default = "default_n0")]
    pub n0: u32,
    #[serde(default = "default_sigma_list")]
    pub sigma_list: Vec<u32>,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_n() -> u32 {
    30
}

fn default_n0() -> u32 {
    20
}

fn default_sigma_list() -> Vec<u32> {
    vec![3]
}

fn default_delta() -> f64 {
    0.01
}

impl Default for NormsSection {
    fn default() -> Self {
        NormsSection {
            n: default_n(),
            n0: default_n0(),
            sigma_list: default_sigma_list(),
            delta: default_delta(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct OutputSection {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    /// Dump the state every this many steps; 0 disables dumps.
    #[serde(default)]
    pub fields_every: usize,
    #[serde(default)]
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid: GridSection,
    pub model: ModelSection,
    pub init: InitSection,
    pub stepper: StepperSection,
    #[serde(default)]
    pub norms: NormsSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn from_str_toml(s: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(s).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_str_json(s: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_str_json(&text),
            _ => Self::from_str_toml(&text),
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("config serialize: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.grid.n.is_power_of_two() || self.grid.n < 8 {
            return Err(Error::Config(format!(
                "grid.n = {} must be a power of two >= 8",
                self.grid.n
            )));
        }
        if !(self.grid.l > 0.0) {
            return Err(Error::Config(format!("grid.L = {} must be positive", self.grid.l)));
        }
        if !(self.model.a > 0.0) || !(self.model.b > 0.0) {
            return Err(Error::Config(format!(
                "model.a = {}, model.b = {} must be positive",
                self.model.a, self.model.b
            )));
        }
        if !(self.stepper.dt > 0.0) {
            return Err(Error::Config(format!(
                "stepper.dt = {} must be positive",
                self.stepper.dt
            )));
        }
        if self.stepper.epsilon < 0.0 {
            return Err(Error::Config(format!(
                "stepper.epsilon = {} must be nonnegative",
                self.stepper.epsilon
            )));
        }
        if !(self.stepper.horizon >= 0.0) {
            return Err(Error::Config(format!(
                "stepper.horizon = {} must be nonnegative",
                self.stepper.horizon
            )));
        }
        if self.stepper.sample_stride == 0 {
            return Err(Error::Config("stepper.sample_stride must be >= 1".into()));
        }
        if !(self.norms.delta > 0.0) {
            return Err(Error::Config(format!(
                "norms.delta = {} must be positive",
                self.norms.delta
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        Grid::new(self.grid.n, self.grid.l, self.model.a, self.model.b)
    }

    pub fn stepper_config(&self) -> Result<crate::stepper::StepperConfig> {
        let mut c = crate::stepper::StepperConfig::new(
            self.stepper.dt,
            self.stepper.epsilon,
            self.stepper.horizon,
            self.stepper.sample_stride,
        )?;
        c.linear_only = self.stepper.linear_only;
        Ok(c)
    }

    /// SHA-256 of the canonical TOML serialization, hex-encoded.
    pub fn hash(&self) -> Result<String> {
        let canon = self.to_toml_string()?;
        let mut h = Sha256::new();
        h.update(canon.as_bytes());
        Ok(format!("{:x}", h.finalize()))
    }

    /// Build the initial unknown U0 from the configured recipe.
    pub fn initial_unknown(&self) -> Result<ComplexUnknown> {
        let g = self.grid()?;
        match &self.init {
            InitSection::GaussianRho { amplitude, width } => {
                let (amp, w) = (*amplitude, *width);
                let mut rho = SpectralField::from_fn_physical(&g, |x| {
                    num_complex::Complex64::new(
                        amp * (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * w * w)).exp(),
                        0.0,
                    )
                })
                .to_frequency();
                rho.zero_mean();
                let h = SpectralField::zeros(&g, Representation::Frequency);
                to_unknown(&PerturbationState::new(rho, h, 0.0)?)
            }
            InitSection::GaussianH { amplitude, width } => {
                let (amp, w) = (*amplitude, *width);
                let mut h = SpectralField::from_fn_physical(&g, |x| {
                    num_complex::Complex64::new(
                        amp * (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * w * w)).exp(),
                        0.0,
                    )
                })
                .to_frequency();
                h.zero_mean();
                let rho = SpectralField::zeros(&g, Representation::Frequency);
                to_unknown(&PerturbationState::new(rho, h, 0.0)?)
            }
            InitSection::ModePair { k_vector, amplitude } => {
                let k = *k_vector;
                if k == [0, 0] {
                    return Err(Error::Config("init.k_vector must be nonzero".into()));
                }
                let (i, j) = match (g.index_of_mode(k[0]), g.index_of_mode(k[1])) {
                    (Some(i), Some(j)) => (i, j),
                    _ => {
                        return Err(Error::Config(format!(
                            "init.k_vector ({}, {}) is off-lattice for n = {}",
                            k[0],
                            k[1],
                            g.n()
                        )))
                    }
                };
                let (mi, mj) = (
                    g.index_of_mode(-k[0]).unwrap(),
                    g.index_of_mode(-k[1]).unwrap(),
                );
                let n = g.n();
                let mut rho = SpectralField::zeros(&g, Representation::Frequency);
                let v = num_complex::Complex64::new(*amplitude, 0.0);
                rho.values_mut()[i * n + j] = v;
                rho.values_mut()[mi * n + mj] = v.conj();
                let h = SpectralField::zeros(&g, Representation::Frequency);
                to_unknown(&PerturbationState::new(rho, h, 0.0)?)
            }
            InitSection::File { path } => {
                let f = crate::io::read_field_on(path, &g)?;
                ComplexUnknown::new(f)
            }
        }
    }
}
