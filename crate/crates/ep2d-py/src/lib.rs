//! Python bindings: thin wrappers over the core types and operations, with
//! complex grids exchanged as flat lists of Python complex numbers in
//! row-major order.

use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ep2d::field::{Representation, SpectralField};
use ep2d::model::{ComplexUnknown, PerturbationState};
use ep2d::stepper::StepperConfig;

fn err<T>(r: ep2d::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Grid", frozen)]
#[derive(Clone)]
struct PyGrid {
    inner: Arc<ep2d::grid::Grid>,
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(n: usize, l: f64, a: f64, b: f64) -> PyResult<Self> {
        Ok(PyGrid {
            inner: err(ep2d::grid::Grid::new(n, l, a, b))?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn domain_length(&self) -> f64 {
        self.inner.domain_length()
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b()
    }

    fn wraparound_horizon(&self) -> f64 {
        self.inner.wraparound_horizon()
    }

    /// Lattice frequency of row/column index i.
    fn mode(&self, i: usize) -> i64 {
        self.inner.mode(i)
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(n={}, L={}, a={}, b={})",
            self.inner.n(),
            self.inner.domain_length(),
            self.inner.a(),
            self.inner.b()
        )
    }
}

#[pyclass(name = "Field")]
#[derive(Clone)]
struct PyField {
    inner: SpectralField,
}

#[pymethods]
impl PyField {
    /// Build from row-major values; representation is "physical" or
    /// "frequency".
    #[new]
    fn new(grid: &PyGrid, values: Vec<Complex64>, representation: &str) -> PyResult<Self> {
        let repr = match representation {
            "physical" => Representation::Physical,
            "frequency" => Representation::Frequency,
            other => {
                return Err(PyValueError::new_err(format!(
                    "representation must be 'physical' or 'frequency', got '{other}'"
                )))
            }
        };
        Ok(PyField {
            inner: err(SpectralField::from_values(&grid.inner, values, repr))?,
        })
    }

    #[staticmethod]
    fn zeros(grid: &PyGrid) -> Self {
        PyField {
            inner: SpectralField::zeros(&grid.inner, Representation::Frequency),
        }
    }

    #[getter]
    fn representation(&self) -> &'static str {
        match self.inner.representation() {
            Representation::Physical => "physical",
            Representation::Frequency => "frequency",
        }
    }

    fn values(&self) -> Vec<Complex64> {
        self.inner.values().to_vec()
    }

    fn grid(&self) -> PyGrid {
        PyGrid {
            inner: self.inner.grid().clone(),
        }
    }

    fn to_frequency(&self) -> Self {
        PyField {
            inner: self.inner.to_frequency(),
        }
    }

    fn to_physical(&self) -> Self {
        PyField {
            inner: self.inner.to_physical(),
        }
    }

    fn l2_norm(&self) -> f64 {
        self.inner.l2_norm()
    }

    fn linf_norm(&self) -> f64 {
        self.inner.linf_norm()
    }

    fn sobolev_norm(&self, s: u32) -> f64 {
        ep2d::norms::sobolev_norm(&self.inner, s)
    }

    fn z_norm(&self) -> f64 {
        ep2d::norms::z_norm(&self.inner)
    }

    fn z_prime_norm(&self) -> f64 {
        ep2d::norms::z_prime_norm(&self.inner)
    }

    fn y_norm(&self, n0: u32) -> f64 {
        ep2d::norms::y_norm(&self.inner, n0)
    }

    /// Littlewood-Paley band projection P_k.
    fn lp_project(&self, k: i32) -> Self {
        PyField {
            inner: ep2d::cutoff::lp_project(&self.inner.to_frequency(), k),
        }
    }

    /// Exact linear propagation by e^{-i sign t Lambda}.
    fn propagate_linear(&self, t: f64, sign: i8) -> Self {
        PyField {
            inner: ep2d::dispersion::propagate_linear(&self.inner.to_frequency(), t, sign),
        }
    }
}

#[pyclass(name = "Unknown")]
#[derive(Clone)]
struct PyUnknown {
    inner: ComplexUnknown,
}

#[pymethods]
impl PyUnknown {
    /// Wrap a frequency-space field as the diagonalized unknown U.
    #[new]
    fn new(field: &PyField) -> PyResult<Self> {
        Ok(PyUnknown {
            inner: err(ComplexUnknown::new(field.inner.to_frequency()))?,
        })
    }

    /// Build U from a mean-removed Gaussian density bump with h = 0.
    #[staticmethod]
    fn gaussian_rho(grid: &PyGrid, amplitude: f64, width: f64) -> PyResult<Self> {
        let mut rho = SpectralField::from_fn_physical(&grid.inner, |x| {
            Complex64::new(
                amplitude * (-(x[0] * x[0] + x[1] * x[1]) / (2.0 * width * width)).exp(),
                0.0,
            )
        })
        .to_frequency();
        rho.zero_mean();
        let h = SpectralField::zeros(&grid.inner, Representation::Frequency);
        let state = err(PerturbationState::new(rho, h, 0.0))?;
        Ok(PyUnknown {
            inner: err(ep2d::model::to_unknown(&state))?,
        })
    }

    fn field(&self) -> PyField {
        PyField {
            inner: self.inner.field().clone(),
        }
    }

    /// (rho, h) of the perturbation state at the given time.
    fn to_state(&self, time: f64) -> PyResult<(PyField, PyField)> {
        let s = err(ep2d::model::to_state(&self.inner, time))?;
        Ok((
            PyField {
                inner: s.rho().clone(),
            },
            PyField {
                inner: s.h().clone(),
            },
        ))
    }

    fn nonlinearity(&self) -> PyField {
        PyField {
            inner: ep2d::model::nonlinearity_physical(&self.inner),
        }
    }

    fn conserved_energy(&self, time: f64) -> PyResult<f64> {
        let s = err(ep2d::model::to_state(&self.inner, time))?;
        Ok(ep2d::model::conserved_energy(&s))
    }

    fn energy_sigma(&self, sigma: u32) -> PyResult<f64> {
        err(ep2d::norms::energy_sigma(&self.inner, sigma))
    }

    /// (neutrality residual, curl residual, min density) at the given time.
    fn diagnostics(&self, time: f64) -> PyResult<(f64, f64, f64)> {
        let s = err(ep2d::model::to_state(&self.inner, time))?;
        let d = ep2d::model::diagnostics(&s);
        Ok((d.neutrality_residual, d.curl_residual, d.min_density))
    }

    /// One integrating-factor RK4 step of size dt with heat regularization
    /// epsilon.
    #[pyo3(signature = (dt, epsilon=0.0, linear_only=false))]
    fn step(&self, dt: f64, epsilon: f64, linear_only: bool) -> PyResult<Self> {
        let mut cfg = err(StepperConfig::new(dt, epsilon, dt, 1))?;
        cfg.linear_only = linear_only;
        Ok(PyUnknown {
            inner: err(ep2d::stepper::step(&self.inner, &cfg))?,
        })
    }

    /// Integrate to the horizon, returning (final unknown, sampled times,
    /// sampled |n - 1|_inf, sampled |grad v|_inf).
    #[pyo3(signature = (dt, horizon, epsilon=0.0, sample_stride=1))]
    fn run(
        &self,
        dt: f64,
        horizon: f64,
        epsilon: f64,
        sample_stride: usize,
    ) -> PyResult<(Self, Vec<f64>, Vec<f64>, Vec<f64>)> {
        let cfg = err(StepperConfig::new(dt, epsilon, horizon, sample_stride))?;
        let mut times = Vec::new();
        let mut dens = Vec::new();
        let mut grads = Vec::new();
        let (uf, _) = err(ep2d::stepper::run(&self.inner, &cfg, |u, t| {
            let s = ep2d::model::to_state(u, t)?;
            let (d, g) = ep2d::norms::linf_observables(&s);
            times.push(t);
            dens.push(d);
            grads.push(g);
            Ok(())
        }))?;
        Ok((PyUnknown { inner: uf }, times, dens, grads))
    }

    /// Corrected profile What at the given lattice modes.
    fn w_profile(&self, time: f64, modes: Vec<[i64; 2]>) -> PyResult<Vec<Complex64>> {
        err(ep2d::normal_form::w_profile(&self.inner, time, &modes))
    }

    /// Cubic right-hand side of the W equation at the given lattice modes.
    fn w_rhs_cubic(&self, time: f64, modes: Vec<[i64; 2]>) -> PyResult<Vec<Complex64>> {
        err(ep2d::normal_form::w_rhs_cubic(&self.inner, time, &modes))
    }
}

#[pyfunction]
fn lambda_eval(xi: [f64; 2], a: f64, b: f64) -> f64 {
    ep2d::dispersion::lambda_eval(xi, a, b)
}

#[pyfunction]
fn phase_trilinear(
    signature: &str,
    xi: [f64; 2],
    eta: [f64; 2],
    chi: [f64; 2],
    a: f64,
    b: f64,
) -> PyResult<f64> {
    use ep2d::dispersion::TrilinearSig::*;
    let sig = match signature {
        "+++" => PPP,
        "++-" => PPM,
        "+--" => PMM,
        "---" => MMM,
        other => {
            return Err(PyValueError::new_err(format!(
                "signature must be one of +++, ++-, +--, ---, got '{other}'"
            )))
        }
    };
    Ok(ep2d::dispersion::phase_trilinear(sig, xi, eta, chi, a, b))
}

/// Sampled phase-inequality certificates, as a JSON string.
#[pyfunction]
fn certify_phase_bounds(a: f64, b: f64, samples: usize, seed: u64) -> PyResult<String> {
    let rep = err(ep2d::dispersion::certify_phase_bounds(a, b, samples, seed, 20.0))?;
    serde_json::to_string_pretty(&rep).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Least-squares decay exponent of values against (1 + t); returns
/// (exponent, confidence half-width).
#[pyfunction]
fn fit_decay(times: Vec<f64>, values: Vec<f64>) -> PyResult<(f64, f64)> {
    let fit = err(ep2d::verify::fit_decay("observable", &times, &values))?;
    Ok((fit.exponent, fit.confidence_half_width))
}

/// Run a full configured simulation from TOML text; returns the JSON summary.
#[pyfunction]
fn simulate_toml(config: &str) -> PyResult<String> {
    let cfg = err(ep2d::config::RunConfig::from_str_toml(config))?;
    let arts = err(ep2d::cli::simulate(&cfg))?;
    serde_json::to_string_pretty(&arts.summary).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn ep2d_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyUnknown>()?;
    m.add_function(wrap_pyfunction!(lambda_eval, m)?)?;
    m.add_function(wrap_pyfunction!(phase_trilinear, m)?)?;
    m.add_function(wrap_pyfunction!(certify_phase_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(fit_decay, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_toml, m)?)?;
    Ok(())
}
