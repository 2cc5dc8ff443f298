//! Smooth dyadic cutoffs and Littlewood-Paley projections.
//!
//! The generating profile phi is even, equal to 1 on [-5/4, 5/4] and
//! supported in [-8/5, 8/5], with a C-infinity transition on [5/4, 8/5]
//! built from the standard bump g(u) = exp(-1/u):
//!
//!   phi(r) = g(1 - s) / (g(1 - s) + g(s)),   s = (|r| - 5/4) / (8/5 - 5/4).
//!
//! The exact formula is fixed here so every norm value is bit-reproducible.
//! Band pieces are phi_k(r) = phi(r / 2^k) - phi(r / 2^(k-1)), supported in
//! {5/8 * 2^k <= r <= 8/5 * 2^k}, and they telescope: sum_k phi_k = 1 away
//! from the origin.



use num_complex::Complex64;

use crate::field::SpectralField;
use crate::grid::Grid;

const PLATEAU: f64 = 1.25;
const SUPPORT: f64 = 1.6;

fn bump(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// The generating cutoff profile phi.
pub fn phi(r: f64) -> f64 {
    let r = r.abs();
    if r <= PLATEAU {
        1.0
    } else if r >= SUPPORT {
        0.0
    } else {
        let s = (r - PLATEAU) / (SUPPORT - PLATEAU);
        let up = bump(1.0 - s);
        up / (up + bump(s))
    }
}

/// Dyadic band piece phi_k(r) = phi(r/2^k) - phi(r/2^(k-1)).
pub fn phi_band(r: f64, k: i32) -> f64 {
    let p = 2f64.powi(k);
    phi(r / p) - phi(r / (p / 2.0))
}

/// Low cutoff phi_{<=k}(r) = phi(r/2^k) (the telescoped sum over bands <= k).
pub fn phi_low(r: f64, k: i32) -> f64 {
    phi(r / 2f64.powi(k))
}

/// Range of dyadic frequency bands with nonempty intersection with the grid's
/// nonzero frequency lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPartition {
    pub k_min: i32,
    pub k_max: i32,
}

impl DyadicPartition {
    pub fn for_grid(grid: &Grid) -> Self {
        let xi_lo = grid.dxi();
        let xi_hi = grid.xi_max();
        // band k covers {5/8 * 2^k <= |xi| <= 8/5 * 2^k}
        let k_min = (xi_lo / SUPPORT).log2().ceil() as i32;
        let k_max = (xi_hi / (5.0 / 8.0)).log2().floor() as i32;
        DyadicPartition { k_min, k_max }
    }

    pub fn bands(&self) -> impl Iterator<Item = i32> {
        self.k_min..=self.k_max
    }
}

/// Littlewood-Paley projection P_k f.
pub fn lp_project(f: &SpectralField, k: i32) -> SpectralField {
    f.apply_multiplier(|xi| {
        let r = xi[0].hypot(xi[1]);
        Complex64::new(phi_band(r, k), 0.0)
    })
    .expect("band cutoff is finite")
}

/// Projection onto an interval of bands, P_{[k_lo, k_hi]} f.
pub fn lp_project_interval(f: &SpectralField, k_lo: i32, k_hi: i32) -> SpectralField {
    f.apply_multiplier(|xi| {
        let r = xi[0].hypot(xi[1]);
        Complex64::new(phi_low(r, k_hi) - phi_low(r, k_lo - 1), 0.0)
    })
    .expect("band cutoff is finite")
}

/// Spatial ring weight used by the Z norm: the j = 0 term carries all mass
/// at |x| <= O(1) via the low cutoff, and j >= 1 terms are dyadic rings.
pub fn spatial_ring(x: [f64; 2], j: i32) -> f64 {
    let r = x[0].hypot(x[1]);
    if j == 0 {
        phi_low(r, 0)
    } else {
        phi_band(r, j)
    }
}

/// Largest spatial ring index with support intersecting the centered box.
pub fn max_spatial_ring(grid: &Grid) -> i32 {
    let r_max = grid.domain_length() * std::f64::consts::SQRT_2 / 2.0;
    ((r_max / (5.0 / 8.0)).log2().floor() as i32).max(0)
}
