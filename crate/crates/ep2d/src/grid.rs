//! Periodic N x N grid on the torus of side L, with the frequency lattice
//! (2pi/L) Z^2 and the model constants a, b carried for multiplier
//! construction.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Square periodic grid. Frequencies are stored in FFT layout: along each
/// axis the integer modes run 0, 1, ..., N/2-1, -N/2, ..., -1.
pub struct Grid {
    n: usize,
    l: f64,
    a: f64,
    b: f64,
    /// Per-axis frequency values (2pi/L) k in FFT layout.
    freqs: Vec<f64>,
    /// Per-axis signed integer modes in FFT layout.
    modes: Vec<i64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(n: usize, l: f64, a: f64, b: f64) -> Result<Arc<Grid>> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "n_points must be a power of two >= 8, got {n}"
            )));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Grid(format!("domain length must be positive, got {l}")));
        }
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::Grid(format!(
                "model constants must be strictly positive, got a={a}, b={b}"
            )));
        }
        let dxi = 2.0 * std::f64::consts::PI / l;
        let modes: Vec<i64> = (0..n)
            .map(|i| if i < n / 2 { i as i64 } else { i as i64 - n as i64 })
            .collect();
        let freqs = modes.iter().map(|&k| dxi * k as f64).collect();
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(n);
        let fft_inv = planner.plan_fft_inverse(n);
        Ok(Arc::new(Grid {
            n,
            l,
            a,
            b,
            freqs,
            modes,
            fft_fwd,
            fft_inv,
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn domain_length(&self) -> f64 {
        self.l
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Grid spacing L/N.
    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Frequency lattice spacing 2pi/L.
    pub fn dxi(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.l
    }

    /// Signed integer mode along one axis for storage index i.
    pub fn mode(&self, i: usize) -> i64 {
        self.modes[i]
    }

    /// Storage index along one axis for a signed integer mode, if representable.
    pub fn index_of_mode(&self, k: i64) -> Option<usize> {
        let half = self.n as i64 / 2;
        if k >= -half && k < half {
            Some(k.rem_euclid(self.n as i64) as usize)
        } else {
            None
        }
    }

    /// Frequency vector at storage index (i, j).
    pub fn xi(&self, i: usize, j: usize) -> [f64; 2] {
        [self.freqs[i], self.freqs[j]]
    }

    /// Frequency vector at flat storage index.
    pub fn xi_flat(&self, idx: usize) -> [f64; 2] {
        self.xi(idx / self.n, idx % self.n)
    }

    /// Physical coordinate at storage index (i, j), centered so that
    /// x in [-L/2, L/2)^2.
    pub fn x(&self, i: usize, j: usize) -> [f64; 2] {
        let c = |i: usize| {
            let v = i as f64 * self.dx();
            if v < self.l / 2.0 {
                v
            } else {
                v - self.l
            }
        };
        [c(i), c(j)]
    }

    /// Dispersion relation Lambda(xi) = sqrt(a |xi|^2 + b).
    pub fn lambda(&self, xi: [f64; 2]) -> f64 {
        (self.a * (xi[0] * xi[0] + xi[1] * xi[1]) + self.b).sqrt()
    }

    /// Maximum representable |xi| (corner of the frequency lattice).
    pub fn xi_max(&self) -> f64 {
        let nyq = self.dxi() * (self.n / 2) as f64;
        nyq * std::f64::consts::SQRT_2
    }

    /// Time before which periodic wraparound (group speed <= sqrt(a)) cannot
    /// contaminate decay measurements.
    pub fn wraparound_horizon(&self) -> f64 {
        self.l / (4.0 * self.a.sqrt())
    }

    pub(crate) fn fft_fwd(&self) -> &Arc<dyn Fft<f64>> {
        &self.fft_fwd
    }

    pub(crate) fn fft_inv(&self) -> &Arc<dyn Fft<f64>> {
        &self.fft_inv
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.l == other.l && self.a == other.a && self.b == other.b
    }
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("l", &self.l)
            .field("a", &self.a)
            .field("b", &self.b)
            .finish()
    }
}
