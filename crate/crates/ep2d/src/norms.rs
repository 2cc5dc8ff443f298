//! Function-space machinery: Sobolev norms, the dyadically localized Z norm,
//! Z', Y^{N0}, the time-weighted X tracker, and the energy functionals E_P
//! and E_sigma.
//!
//! The Z norm weights each frequency band P_k by 2^{k/10} + 2^{10k} and each
//! spatial dyadic ring by 2^j:
//!
//!   |f|_Z = sup_k (2^{k/10} + 2^{10k}) [ |P_k f|_{L^2}
//!           + sum_{j >= 0} 2^j |ring_j(x) P_k f|_{L^2} ],
//!
//! where the j = 0 ring absorbs all mass at |x| <= O(1). Z' weights band
//! maxima: |f|_{Z'} = sup_k (2^{k/2} + 2^{2k}) |P_k f|_{L^infty}. Both sups
//! run over the grid-representable window; outside it the band projections
//! vanish identically, so the truncation is exact.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cutoff::{lp_project, max_spatial_ring, spatial_ring, DyadicPartition};
use crate::field::SpectralField;
use crate::model::{ComplexUnknown, Diagnostics, PerturbationState};
use crate::{Error, Result};

/// Per-sample record of every monitored norm, energy, and diagnostic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormReport {
    pub time: f64,
    pub h_norms: BTreeMap<u32, f64>,
    pub z_norm: f64,
    pub z_prime: f64,
    pub y_norm: f64,
    /// Y^{N0} of the linear profile e^{it Lambda} U, used by the X tracker.
    pub y_profile: Option<f64>,
    pub linf_density: f64,
    pub linf_gradv: f64,
    pub e_sigma: BTreeMap<u32, f64>,
    pub e_physical: f64,
    pub diagnostics: Diagnostics,
}

/// |f|_{H^s} = (sum_xi (1 + |xi|^2)^s |fhat|^2)^{1/2} under the grid measure
/// (so s = 0 coincides with the L^2 norm).
pub fn sobolev_norm(f: &SpectralField, s: u32) -> f64 {
    let fh = f.to_frequency();
    let g = fh.grid();
    let mut acc = 0.0;
    for (idx, v) in fh.values().iter().enumerate() {
        let xi = g.xi_flat(idx);
        let w = (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).powi(s as i32);
        acc += w * v.norm_sqr();
    }
    acc.sqrt() / g.domain_length()
}

/// The band bracket of the Z norm: |P_k f|_{L^2} + sum_j 2^j |ring_j P_k f|.
fn z_band_bracket(pk_phys: &SpectralField, j_max: i32) -> f64 {
    let g = pk_phys.grid();
    let n = g.n();
    let mut bracket = pk_phys.l2_norm();
    for j in 0..=j_max {
        let mut acc = 0.0;
        for i in 0..n {
            for jj in 0..n {
                let w = spatial_ring(g.x(i, jj), j);
                if w != 0.0 {
                    acc += (w * w) * pk_phys.at(i, jj).norm_sqr();
                }
            }
        }
        bracket += 2f64.powi(j) * (acc.sqrt() * g.dx());
    }
    bracket
}

fn z_weight(k: i32) -> f64 {
    2f64.powf(k as f64 / 10.0) + 2f64.powf(10.0 * k as f64)
}

fn z_prime_weight(k: i32) -> f64 {
    2f64.powf(k as f64 / 2.0) + 2f64.powf(2.0 * k as f64)
}

/// The Z norm: sup over representable bands of the weighted bracket.
pub fn z_norm(f: &SpectralField) -> f64 {
    let fh = f.to_frequency();
    let g = fh.grid();
    let part = DyadicPartition::for_grid(g);
    let j_max = max_spatial_ring(g);
    let mut sup: f64 = 0.0;
    for k in part.bands() {
        let pk = lp_project(&fh, k).to_physical();
        sup = sup.max(z_weight(k) * z_band_bracket(&pk, j_max));
    }
    sup
}

/// The Z' norm: sup_k (2^{k/2} + 2^{2k}) |P_k f|_{L^infty}.
pub fn z_prime_norm(f: &SpectralField) -> f64 {
    let fh = f.to_frequency();
    let g = fh.grid();
    let part = DyadicPartition::for_grid(g);
    let mut sup: f64 = 0.0;
    for k in part.bands() {
        let pk = lp_project(&fh, k).to_physical();
        sup = sup.max(z_prime_weight(k) * pk.linf_norm());
    }
    sup
}

/// |f|_{Y^{N0}} = |f|_{H^{N0}} + |f|_Z.
pub fn y_norm(f: &SpectralField, n0: u32) -> f64 {
    sobolev_norm(f, n0) + z_norm(f)
}

/// Enumeration of the multi-indices entering the order-sigma energy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyOrder {
    pub sigma: u32,
    pub multiindices: Vec<[u32; 2]>,
}

impl EnergyOrder {
    pub fn new(sigma: u32) -> Result<Self> {
        if sigma > 40 {
            return Err(Error::InvalidInput(format!(
                "energy order {sigma} exceeds the supported range [0, 40]"
            )));
        }
        let mut multiindices = Vec::new();
        for a1 in 0..=sigma {
            for a2 in 0..=(sigma - a1) {
                multiindices.push([a1, a2]);
            }
        }
        debug_assert_eq!(
            multiindices.len(),
            ((sigma + 1) * (sigma + 2) / 2) as usize
        );
        Ok(EnergyOrder {
            sigma,
            multiindices,
        })
    }
}

/// D^alpha = (i xi_1)^{a1} (i xi_2)^{a2} as a frequency multiplier.
fn apply_dalpha(f: &SpectralField, alpha: [u32; 2]) -> SpectralField {
    f.apply_multiplier(|xi| {
        Complex64::new(0.0, xi[0]).powu(alpha[0]) * Complex64::new(0.0, xi[1]).powu(alpha[1])
    })
    .expect("polynomial multiplier is finite")
}

/// Riesz transform R_j f = (i xi_j / |xi|) fhat, zero at the origin.
pub fn riesz(f: &SpectralField, j: usize) -> SpectralField {
    f.apply_multiplier(|xi| {
        let r = xi[0].hypot(xi[1]);
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, xi[j] / r)
        }
    })
    .expect("Riesz symbol is finite")
}

/// E_P for P = D^alpha in real variables X = Re U, Y = Im U:
///
///   E_P = int (PX)^2 + (PY)^2 + sum_j int |grad| Lambda^{-1} X (R_j P Y)^2.
///
/// The quadratic part is evaluated by Parseval; the cubic correction in
/// physical space against the precomputed weight w = |grad| Lambda^{-1} X.
fn energy_p(
    xh: &SpectralField,
    yh: &SpectralField,
    w_phys: &SpectralField,
    alpha: [u32; 2],
) -> f64 {
    let g = xh.grid();
    let l2sq = |f: &SpectralField| {
        let n = f.l2_norm();
        n * n
    };
    let px = apply_dalpha(xh, alpha);
    let py = apply_dalpha(yh, alpha);
    let mut e = l2sq(&px) + l2sq(&py);
    let dx2 = g.dx() * g.dx();
    for j in 0..2 {
        let rj = riesz(&py, j).to_physical();
        let mut acc = 0.0;
        for (idx, v) in rj.values().iter().enumerate() {
            let w = w_phys.values()[idx].re;
            acc += w * v.re * v.re;
        }
        e += acc * dx2;
    }
    e
}

/// E_sigma = sum over multi-indices |alpha| <= sigma of E_{D^alpha}.
pub fn energy_sigma(u: &ComplexUnknown, sigma: u32) -> Result<f64> {
    let order = EnergyOrder::new(sigma)?;
    let (xh, yh) = u.real_imag();
    let g = u.grid();
    // w = |grad| Lambda^{-1} X in physical space
    let a = g.a();
    let b = g.b();
    let w_phys = xh
        .apply_multiplier(|xi| {
            let r = xi[0].hypot(xi[1]);
            Complex64::new(r / (a * r * r + b).sqrt(), 0.0)
        })
        .expect("weight symbol is finite")
        .to_physical();
    let mut total = 0.0;
    for &alpha in &order.multiindices {
        total += energy_p(&xh, &yh, &w_phys, alpha);
    }
    Ok(total)
}

/// The quadratic (Sobolev) part of E_sigma: the multi-index weighted sum
/// sum_{|alpha| <= sigma} sum_xi |xi^alpha|^2 (|Xhat|^2 + |Yhat|^2) / L^2.
pub fn energy_sigma_quadratic(u: &ComplexUnknown, sigma: u32) -> Result<f64> {
    let order = EnergyOrder::new(sigma)?;
    let (xh, yh) = u.real_imag();
    let g = u.grid();
    let mut total = 0.0;
    for (idx, (x, y)) in xh.values().iter().zip(yh.values()).enumerate() {
        let xi = g.xi_flat(idx);
        let mut wsum = 0.0;
        for &alpha in &order.multiindices {
            let w = xi[0].powi(alpha[0] as i32) * xi[1].powi(alpha[1] as i32);
            wsum += w * w;
        }
        total += wsum * (x.norm_sqr() + y.norm_sqr());
    }
    let l = g.domain_length();
    Ok(total / (l * l))
}

/// Grid maxima of |n - 1| and of the four entries of the velocity gradient.
pub fn linf_observables(s: &PerturbationState) -> (f64, f64) {
    let rho_phys = s.rho().to_physical();
    let linf_density = rho_phys
        .values()
        .iter()
        .map(|v| v.re.abs())
        .fold(0.0, f64::max);
    // v = grad h, so dv_j / dx_i has symbol -xi_i xi_j
    let mut linf_gradv: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let d = s
                .h()
                .apply_multiplier(|xi| Complex64::new(-xi[i] * xi[j], 0.0))
                .expect("gradient symbol is finite")
                .to_physical();
            let m = d.values().iter().map(|v| v.re.abs()).fold(0.0, f64::max);
            linf_gradv = linf_gradv.max(m);
        }
    }
    (linf_density, linf_gradv)
}

/// The time-weighted tracker
/// sup_t (1 + t)^{-delta} |U(t)|_{H^N} + sup_t |e^{it Lambda} U(t)|_{Y^{N0}}.
pub fn x_norm_tracker(history: &[NormReport], n: u32, delta: f64) -> Result<f64> {
    if history.is_empty() {
        return Err(Error::InvalidInput("empty norm history".into()));
    }
    let mut sup_h: f64 = 0.0;
    let mut sup_y: f64 = 0.0;
    for rec in history {
        let h = rec.h_norms.get(&n).ok_or_else(|| {
            Error::InvalidInput(format!("norm history lacks H^{n} at t = {}", rec.time))
        })?;
        let y = rec.y_profile.ok_or_else(|| {
            Error::InvalidInput(format!(
                "norm history lacks profile Y norms at t = {}",
                rec.time
            ))
        })?;
        sup_h = sup_h.max((1.0 + rec.time).powf(-delta) * h);
        sup_y = sup_y.max(y);
    }
    Ok(sup_h + sup_y)
}
