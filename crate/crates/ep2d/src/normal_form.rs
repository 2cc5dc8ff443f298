//! Bilinear and cubic interaction symbols, the profile V = e^{it Lambda} U,
//! and the quadratically corrected profile W.
//!
//! The bilinear symbols encode the quadratic nonlinearity in frequency space,
//!   [d/dt + i Lambda(xi)] Uhat(xi) =
//!     sum_{(mu,nu)} int m_{mu nu}(xi, eta) U_mu^(xi - eta) U_nu^(eta) d eta,
//! with U_+ = U, U_- = conj(U). The constant c0 is fixed by requiring this
//! representation to agree with the physical-space product form of the
//! nonlinearity; under the transform conventions of this crate (see `field`)
//! that forces c0 = (2 pi)^{-2}, which the model-module equivalence test pins
//! to machine precision. Lattice quadrature uses the cell measure
//! (2 pi / L)^2 per eta node.
//!
//! The cubic symbols arise from one integration by parts in time: dividing by
//! the non-resonant phase Phi_{mu nu} converts quadratic interactions into
//! cubic ones, and the corrected profile W satisfies an exact cubic evolution
//! identity. Both the bilinear-assembled route and the fully expanded cubic
//! symbols are implemented; their agreement is a machine-precision check of
//! the cubic assembly.

use num_complex::Complex64;

use crate::dispersion::{lambda_eval, phase_bilinear, BilinearSig, TrilinearSig};
use crate::field::SpectralField;
use crate::model::{nonlinearity_physical, ComplexUnknown};
use crate::{Error, Result};

/// c0 = (2 pi)^{-2}, fixed by the nonlinearity-equivalence oracle.
pub const DEFAULT_C0: f64 = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);

/// Model constants threaded to every symbol evaluator.
#[derive(Debug, Clone, Copy)]
pub struct SymbolParams {
    pub a: f64,
    pub b: f64,
    pub c0: f64,
}

impl SymbolParams {
    pub fn new(a: f64, b: f64) -> Self {
        SymbolParams {
            a,
            b,
            c0: DEFAULT_C0,
        }
    }

    fn lambda(&self, v: [f64; 2]) -> f64 {
        lambda_eval(v, self.a, self.b)
    }
}

#[inline]
fn sub(x: [f64; 2], y: [f64; 2]) -> [f64; 2] {
    [x[0] - y[0], x[1] - y[1]]
}

#[inline]
fn dot(x: [f64; 2], y: [f64; 2]) -> f64 {
    x[0] * y[0] + x[1] * y[1]
}

#[inline]
fn norm(x: [f64; 2]) -> f64 {
    x[0].hypot(x[1])
}

/// Bilinear symbol m_{mu nu}(xi, eta). Returns 0 whenever any of |xi|, |eta|,
/// |xi - eta| vanishes (the neutral-data convention: those integrand points
/// carry no mass).
pub fn bilinear_symbol(
    sig: BilinearSig,
    xi: [f64; 2],
    eta: [f64; 2],
    p: &SymbolParams,
) -> Complex64 {
    let xmn = sub(xi, eta);
    let (nx, ne, nm) = (norm(xi), norm(eta), norm(xmn));
    if nx == 0.0 || ne == 0.0 || nm == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let lx = p.lambda(xi);
    let lm = p.lambda(xmn);
    let dot_xe = dot(xi, eta);
    let dot_em = dot(eta, xmn);
    let val = match sig {
        BilinearSig::PP => {
            -lx * nm * dot_xe / (4.0 * lm * nx * ne) - nx * dot_em / (8.0 * ne * nm)
        }
        BilinearSig::PM => {
            let le = p.lambda(eta);
            let dot_xm = dot(xi, xmn);
            -lx * ne * dot_xm / (4.0 * le * nx * nm) + lx * nm * dot_xe / (4.0 * lm * nx * ne)
                + nx * dot_em / (4.0 * ne * nm)
        }
        BilinearSig::MM => {
            lx * nm * dot_xe / (4.0 * lm * nx * ne) - nx * dot_em / (8.0 * ne * nm)
        }
    };
    Complex64::new(0.0, p.c0 * val)
}

/// The conjugate-flip family m'. Only the three signatures entering the
/// conjugated evolution exist: m'_{--}, m'_{-+}, m'_{++}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipSig {
    MM,
    MP,
    PP,
}

/// m'_{--}(v,w) = conj(m_{++}(-v,-w)),  m'_{-+}(v,w) = conj(m_{+-}(-v,-w)),
/// m'_{++}(v,w) = conj(m_{--}(-v,-w)).
pub fn flip_symbol(sig: FlipSig, v: [f64; 2], w: [f64; 2], p: &SymbolParams) -> Complex64 {
    let nv = [-v[0], -v[1]];
    let nw = [-w[0], -w[1]];
    let base = match sig {
        FlipSig::MM => BilinearSig::PP,
        FlipSig::MP => BilinearSig::PM,
        FlipSig::PP => BilinearSig::MM,
    };
    bilinear_symbol(base, nv, nw, p).conj()
}

fn phi(sig: BilinearSig, xi: [f64; 2], eta: [f64; 2], p: &SymbolParams) -> f64 {
    phase_bilinear(sig, xi, eta, p.a, p.b)
}

/// Cubic symbol m_{mu nu sigma}(xi, eta, chi), assembled from bilinear
/// symbols, flips, and reciprocal bilinear phases. Returns None if a phase
/// denominator vanishes exactly (excluded in exact arithmetic; guarded
/// against rounding).
pub fn cubic_symbol(
    sig: TrilinearSig,
    xi: [f64; 2],
    eta: [f64; 2],
    chi: [f64; 2],
    p: &SymbolParams,
) -> Option<Complex64> {
    use BilinearSig::{MM, PM, PP};
    let m = |s, x, e| bilinear_symbol(s, x, e, p);
    let mp = |s, v, w| flip_symbol(s, v, w, p);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut add = |num: Complex64, phase: f64| -> Option<()> {
        if phase == 0.0 {
            if num.norm_sqr() == 0.0 {
                return Some(());
            }
            return None;
        }
        acc += num / phase;
        Some(())
    };
    let xmc = sub(xi, chi);
    let emc = sub(eta, chi);
    let xme = sub(xi, eta);
    match sig {
        TrilinearSig::PPP => {
            add(m(PP, xi, chi) * m(PP, xmc, emc), phi(PP, xi, chi, p))?;
            add(m(PP, xi, eta) * m(PP, eta, chi), phi(PP, xi, eta, p))?;
            add(m(PM, xi, eta) * mp(FlipSig::PP, eta, chi), phi(PM, xi, eta, p))?;
        }
        TrilinearSig::PPM => {
            add(m(PP, xi, xme) * m(PM, eta, chi), phi(PP, xi, xme, p))?;
            add(m(PP, xi, eta) * m(PM, eta, chi), phi(PP, xi, eta, p))?;
            add(m(PM, xi, chi) * m(PP, xmc, emc), phi(PM, xi, chi, p))?;
            add(m(PM, xi, eta) * mp(FlipSig::MP, eta, emc), phi(PM, xi, eta, p))?;
            add(m(MM, xi, chi) * mp(FlipSig::PP, xmc, xme), phi(MM, xi, chi, p))?;
            add(m(MM, xi, xmc) * mp(FlipSig::PP, xmc, xme), phi(MM, xi, xmc, p))?;
        }
        TrilinearSig::PMM => {
            add(m(PP, xi, xme) * m(MM, eta, chi), phi(PP, xi, xme, p))?;
            add(m(PP, xi, eta) * m(MM, eta, chi), phi(PP, xi, eta, p))?;
            add(m(PM, xi, chi) * m(PM, xmc, emc), phi(PM, xi, chi, p))?;
            add(m(PM, xi, eta) * mp(FlipSig::MM, eta, emc), phi(PM, xi, eta, p))?;
            add(m(MM, xi, chi) * mp(FlipSig::MP, xmc, xme), phi(MM, xi, chi, p))?;
            add(m(MM, xi, xmc) * mp(FlipSig::MP, xmc, xme), phi(MM, xi, xmc, p))?;
        }
        TrilinearSig::MMM => {
            add(m(PM, xi, chi) * m(MM, xmc, emc), phi(PM, xi, chi, p))?;
            add(m(MM, xi, chi) * mp(FlipSig::MM, xmc, emc), phi(MM, xi, chi, p))?;
            add(m(MM, xi, eta) * mp(FlipSig::MM, eta, chi), phi(MM, xi, eta, p))?;
        }
    }
    Some(acc)
}

/// V = e^{it Lambda} U in frequency space.
pub fn profile_of(u: &SpectralField, t: f64) -> SpectralField {
    crate::dispersion::propagate_linear(u, t, -1)
}

/// Invert the profile map: U = e^{-it Lambda} V.
pub fn unknown_of(v: &SpectralField, t: f64) -> SpectralField {
    crate::dispersion::propagate_linear(v, t, 1)
}

fn on_lattice(u: &ComplexUnknown, k: [i64; 2]) -> Result<(usize, usize)> {
    let g = u.field().grid();
    match (g.index_of_mode(k[0]), g.index_of_mode(k[1])) {
        (Some(i), Some(j)) => Ok((i, j)),
        _ => Err(Error::InvalidInput(format!(
            "mode ({}, {}) is off-lattice for n = {}",
            k[0],
            k[1],
            g.n()
        ))),
    }
}

/// Look up Uhat at integer mode k, or 0 when off-lattice.
fn mode_value(f: &SpectralField, k: [i64; 2]) -> Complex64 {
    let g = f.grid();
    match (g.index_of_mode(k[0]), g.index_of_mode(k[1])) {
        (Some(i), Some(j)) => f.at(i, j),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// What(xi, t) at the requested lattice modes, by direct quadrature over eta:
/// What = e^{itL} Uhat + i e^{itL} sum_{mu nu} int (m/Phi) U_mu^ U_nu^ d eta.
pub fn w_profile(u: &ComplexUnknown, t: f64, modes: &[[i64; 2]]) -> Result<Vec<Complex64>> {
    let uh = u.field();
    let g = uh.grid().clone();
    let ubh = uh.conj_transform();
    let p = SymbolParams::new(g.a(), g.b());
    let cell = g.dxi() * g.dxi();
    let mut out = Vec::with_capacity(modes.len());
    for &k in modes {
        let (i, j) = on_lattice(u, k)?;
        let xi = g.xi(i, j);
        let mut corr = Complex64::new(0.0, 0.0);
        for ei in 0..g.n() {
            for ej in 0..g.n() {
                let eta = g.xi(ei, ej);
                let kd = [k[0] - g.mode(ei), k[1] - g.mode(ej)];
                let up_d = mode_value(uh, kd);
                let um_d = mode_value(&ubh, kd);
                let up_e = uh.at(ei, ej);
                let um_e = ubh.at(ei, ej);
                for (sig, f, gg) in [
                    (BilinearSig::PP, up_d, up_e),
                    (BilinearSig::PM, up_d, um_e),
                    (BilinearSig::MM, um_d, um_e),
                ] {
                    let m = bilinear_symbol(sig, xi, eta, &p);
                    if m.norm_sqr() == 0.0 {
                        continue;
                    }
                    corr += m / phi(sig, xi, eta, &p) * f * gg;
                }
            }
        }
        let lam = g.lambda(xi);
        let ph = Complex64::new(0.0, t * lam).exp();
        out.push(ph * uh.at(i, j) + Complex64::new(0.0, 1.0) * ph * corr * cell);
    }
    Ok(out)
}

/// d/dt What(xi, t) assembled from bilinear symbols and the quadratic
/// nonlinearity (one lattice sum per mode). Algebraically identical to the
/// expanded cubic form; used as the cheap evaluation route.
pub fn w_rhs_bilinear(u: &ComplexUnknown, t: f64, modes: &[[i64; 2]]) -> Result<Vec<Complex64>> {
    let uh = u.field();
    let g = uh.grid().clone();
    let nh = nonlinearity_physical(u);
    let ubh = uh.conj_transform();
    let nbh = nh.conj_transform();
    let p = SymbolParams::new(g.a(), g.b());
    let cell = g.dxi() * g.dxi();
    let mut out = Vec::with_capacity(modes.len());
    for &k in modes {
        let (i, j) = on_lattice(u, k)?;
        let xi = g.xi(i, j);
        let mut acc = Complex64::new(0.0, 0.0);
        for ei in 0..g.n() {
            for ej in 0..g.n() {
                let eta = g.xi(ei, ej);
                let kd = [k[0] - g.mode(ei), k[1] - g.mode(ej)];
                for (sig, fd, fe, gd, ge) in [
                    (
                        BilinearSig::PP,
                        mode_value(uh, kd),
                        uh.at(ei, ej),
                        mode_value(&nh, kd),
                        nh.at(ei, ej),
                    ),
                    (
                        BilinearSig::PM,
                        mode_value(uh, kd),
                        ubh.at(ei, ej),
                        mode_value(&nh, kd),
                        nbh.at(ei, ej),
                    ),
                    (
                        BilinearSig::MM,
                        mode_value(&ubh, kd),
                        ubh.at(ei, ej),
                        mode_value(&nbh, kd),
                        nbh.at(ei, ej),
                    ),
                ] {
                    let m = bilinear_symbol(sig, xi, eta, &p);
                    if m.norm_sqr() == 0.0 {
                        continue;
                    }
                    acc += m / phi(sig, xi, eta, &p) * (gd * fe + fd * ge);
                }
            }
        }
        let lam = g.lambda(xi);
        let ph = Complex64::new(0.0, t * lam).exp();
        out.push(Complex64::new(0.0, 1.0) * ph * acc * cell);
    }
    Ok(out)
}

/// d/dt What(xi, t) by direct double lattice quadrature of the four cubic
/// integrals with symbols m_{mu nu sigma}. O(N^4) per mode; this is the
/// fully expanded reference route.
pub fn w_rhs_cubic(u: &ComplexUnknown, t: f64, modes: &[[i64; 2]]) -> Result<Vec<Complex64>> {
    let uh = u.field();
    let g = uh.grid().clone();
    let ubh = uh.conj_transform();
    let p = SymbolParams::new(g.a(), g.b());
    let cell2 = (g.dxi() * g.dxi()).powi(2);
    let n = g.n();
    // active modes: skip zero-amplitude factors early
    let active: Vec<(usize, usize)> = (0..n * n)
        .filter(|&idx| uh.values()[idx].norm_sqr() > 0.0 || ubh.values()[idx].norm_sqr() > 0.0)
        .map(|idx| (idx / n, idx % n))
        .collect();
    let mut out = Vec::with_capacity(modes.len());
    for &k in modes {
        let (i, j) = on_lattice(u, k)?;
        let xi = g.xi(i, j);
        let mut acc = Complex64::new(0.0, 0.0);
        // eta is constrained to (eta - chi) + chi over the active factor
        // modes, so iterate over the factor indices and derive eta
        for &(e2i, e2j) in &active {
            let kec = [g.mode(e2i), g.mode(e2j)];
            let up_ec = uh.at(e2i, e2j);
            let um_ec = ubh.at(e2i, e2j);
            for &(ci, cj) in &active {
                let chi = g.xi(ci, cj);
                let kc = [g.mode(ci), g.mode(cj)];
                let keta = [kec[0] + kc[0], kec[1] + kc[1]];
                let eta = [keta[0] as f64 * g.dxi(), keta[1] as f64 * g.dxi()];
                let kd = [k[0] - keta[0], k[1] - keta[1]];
                let up_d = mode_value(uh, kd);
                let um_d = mode_value(&ubh, kd);
                if up_d.norm_sqr() == 0.0 && um_d.norm_sqr() == 0.0 {
                    continue;
                }
                let up_c = uh.at(ci, cj);
                let um_c = ubh.at(ci, cj);
                for (sig, f1, f2, f3) in [
                    (TrilinearSig::PPP, up_d, up_ec, up_c),
                    (TrilinearSig::PPM, up_d, up_ec, um_c),
                    (TrilinearSig::PMM, up_d, um_ec, um_c),
                    (TrilinearSig::MMM, um_d, um_ec, um_c),
                ] {
                    let prod = f1 * f2 * f3;
                    if prod.norm_sqr() == 0.0 {
                        continue;
                    }
                    let m = cubic_symbol(sig, xi, eta, chi, &p).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "singular cubic phase at xi=({}, {}), eta=({}, {}), chi=({}, {})",
                            xi[0], xi[1], eta[0], eta[1], chi[0], chi[1]
                        ))
                    })?;
                    acc += m * prod;
                }
            }
        }
        let lam = g.lambda(xi);
        let ph = Complex64::new(0.0, t * lam).exp();
        out.push(Complex64::new(0.0, 1.0) * ph * acc * cell2);
    }
    Ok(out)
}
