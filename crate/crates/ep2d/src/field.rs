//! Complex fields on the periodic grid with synchronized physical-space and
//! frequency-space views.
//!
//! Normalization is continuum-style so that lattice sums approximate plane
//! integrals: the forward transform is fhat(xi) = sum_x f(x) e^{-i x.xi} dx^2
//! (a Riemann sum for the plane Fourier integral) and the inverse is
//! f(x) = L^{-2} sum_xi fhat(xi) e^{i x.xi}. Under this convention Parseval
//! reads sum_x |f|^2 dx^2 = L^{-2} sum_xi |fhat|^2, and quadratic convolution
//! integrals carry the measure (2pi/L)^2 per lattice cell divided by (2pi)^2.

use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::Grid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Frequency,
}

#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
    repr: Representation,
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>, repr: Representation) -> Self {
        SpectralField {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            repr,
        }
    }

    pub fn from_values(grid: &Arc<Grid>, values: Vec<Complex64>, repr: Representation) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "field length {} does not match grid {}^2",
                values.len(),
                grid.n()
            )));
        }
        Ok(SpectralField {
            grid: grid.clone(),
            values,
            repr,
        })
    }

    /// Sample a physical-space function on the centered grid.
    pub fn from_fn_physical(grid: &Arc<Grid>, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..n {
            for j in 0..n {
                values.push(f(grid.x(i, j)));
            }
        }
        SpectralField {
            grid: grid.clone(),
            values,
            repr: Representation::Physical,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at storage index (i, j).
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.n() + j]
    }

    pub fn to_frequency(&self) -> Self {
        let mut out = self.clone();
        out.make_frequency();
        out
    }

    pub fn to_physical(&self) -> Self {
        let mut out = self.clone();
        out.make_physical();
        out
    }

    pub fn make_frequency(&mut self) {
        if self.repr == Representation::Frequency {
            return;
        }
        let dx2 = self.grid.dx() * self.grid.dx();
        fft2(&self.grid, &mut self.values, true);
        for v in &mut self.values {
            *v *= dx2;
        }
        self.repr = Representation::Frequency;
    }

    pub fn make_physical(&mut self) {
        if self.repr == Representation::Physical {
            return;
        }
        let l2 = self.grid.domain_length() * self.grid.domain_length();
        fft2(&self.grid, &mut self.values, false);
        for v in &mut self.values {
            *v /= l2;
        }
        self.repr = Representation::Physical;
    }

    /// Multiply in frequency space by m(xi). Rejects multipliers that are not
    /// finite at a lattice point; singular multipliers must supply their
    /// xi = 0 convention inside the closure.
    pub fn apply_multiplier(&self, m: impl Fn([f64; 2]) -> Complex64) -> Result<Self> {
        let mut out = self.to_frequency();
        let n = out.grid.n();
        for i in 0..n {
            for j in 0..n {
                let xi = out.grid.xi(i, j);
                let mv = m(xi);
                if !mv.re.is_finite() || !mv.im.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "multiplier not finite at xi = ({}, {})",
                        xi[0], xi[1]
                    )));
                }
                out.values[i * n + j] *= mv;
            }
        }
        Ok(out)
    }

    /// Transform of the complex conjugate: conj(f)^(xi) = conj(fhat(-xi)).
    pub fn conj_transform(&self) -> Self {
        let src = self.to_frequency();
        let n = src.grid.n();
        let mut out = SpectralField::zeros(&src.grid, Representation::Frequency);
        for i in 0..n {
            for j in 0..n {
                let fi = (n - i) % n;
                let fj = (n - j) % n;
                out.values[fi * n + fj] = src.values[i * n + j].conj();
            }
        }
        out
    }

    /// Zero all modes with max(|k1|, |k2|) above two thirds of Nyquist.
    pub fn dealias(&mut self) {
        self.make_frequency();
        let n = self.grid.n();
        let cutoff = 2.0 / 3.0 * (n / 2) as f64;
        for i in 0..n {
            let ki = self.grid.mode(i).unsigned_abs() as f64;
            for j in 0..n {
                let kj = self.grid.mode(j).unsigned_abs() as f64;
                if ki > cutoff || kj > cutoff {
                    self.values[i * n + j] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Pin the mean mode to zero (neutrality).
    pub fn zero_mean(&mut self) {
        self.make_frequency();
        self.values[0] = Complex64::new(0.0, 0.0);
    }

    pub fn mean_mode(&self) -> Complex64 {
        match self.repr {
            Representation::Frequency => self.values[0],
            Representation::Physical => {
                let dx2 = self.grid.dx() * self.grid.dx();
                self.values.iter().sum::<Complex64>() * dx2
            }
        }
    }

    /// L^2 norm under the grid measure; representation-independent.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        match self.repr {
            Representation::Physical => (s * self.grid.dx() * self.grid.dx()).sqrt(),
            Representation::Frequency => s.sqrt() / self.grid.domain_length(),
        }
    }

    /// Grid L^1 norm (physical space).
    pub fn l1_norm(&self) -> f64 {
        let p = self.to_physical();
        let dx2 = p.grid.dx() * p.grid.dx();
        p.values.iter().map(|v| v.norm()).sum::<f64>() * dx2
    }

    /// Grid maximum of |f| (physical space).
    pub fn linf_norm(&self) -> f64 {
        let p = self.to_physical();
        p.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&mut self, alpha: Complex64) {
        for v in &mut self.values {
            *v *= alpha;
        }
    }

    /// self += alpha * other (same grid and representation required).
    pub fn add_scaled(&mut self, alpha: Complex64, other: &SpectralField) {
        assert_eq!(self.repr, other.repr, "representation mismatch");
        assert!(self.grid.as_ref() == other.grid.as_ref(), "grid mismatch");
        for (v, w) in self.values.iter_mut().zip(&other.values) {
            *v += alpha * w;
        }
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.add_scaled(Complex64::new(-1.0, 0.0), other);
        out
    }

    /// Pointwise product in physical space.
    pub fn pointwise_mul(&self, other: &SpectralField) -> SpectralField {
        assert!(self.grid.as_ref() == other.grid.as_ref(), "grid mismatch");
        let a = self.to_physical();
        let b = other.to_physical();
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x * y)
            .collect();
        SpectralField {
            grid: self.grid.clone(),
            values,
            repr: Representation::Physical,
        }
    }

    /// Largest violation of the conjugate symmetry fhat(-xi) = conj(fhat(xi))
    /// relative to the field's L^2 size; zero for real-valued fields.
    pub fn reality_defect(&self) -> f64 {
        let f = self.to_frequency();
        let n = f.grid.n();
        let scale = f.l2_norm().max(1e-300);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let fi = (n - i) % n;
                let fj = (n - j) % n;
                let d = (f.values[fi * n + fj] - f.values[i * n + j].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst / (scale * f.grid.domain_length())
    }

    /// Real part in physical space, returned as a physical field.
    pub fn real_part(&self) -> SpectralField {
        let mut p = self.to_physical();
        for v in &mut p.values {
            *v = Complex64::new(v.re, 0.0);
        }
        p
    }

    /// Imaginary part in physical space, returned as a physical field.
    pub fn imag_part(&self) -> SpectralField {
        let mut p = self.to_physical();
        for v in &mut p.values {
            *v = Complex64::new(v.im, 0.0);
        }
        p
    }
}

/// In-place 2D FFT in the given direction (unscaled).
fn fft2(grid: &Grid, data: &mut [Complex64], forward: bool) {
    let n = grid.n();
    let fft = if forward { grid.fft_fwd() } else { grid.fft_inv() };
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    transpose(data, n);
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    transpose(data, n);
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}
