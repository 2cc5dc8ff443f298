//! State representations of the Euler-Poisson perturbation, the exact
//! change-of-variables chain, both implementations of the quadratic
//! nonlinearity, and the conserved physical quantities.
//!
//! The fluid variables are n = 1 + rho and v = grad h (irrotational flow),
//! and the evolution is carried by the diagonalized complex unknown
//!   U = Lambda |nabla|^{-1} rho + i |nabla| h,
//! which satisfies
//!   (d/dt + i Lambda) U =
//!       (i/4) sum_j Lambda R_j [ |nabla| Lambda^{-1}(U + Ubar) . R_j(U - Ubar) ]
//!     + (i/8) |nabla| [ R_j(U - Ubar) . R_j(U - Ubar) ],
//! with R_j the Riesz transforms i xi_j / |xi|. All singular multipliers act
//! as zero on the mean mode; admissible data are electrically neutral so no
//! mass ever sits there.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::BilinearSig;
use crate::field::{Representation, SpectralField};
use crate::normal_form::{bilinear_symbol, SymbolParams};
use crate::{Error, Result};

const NEUTRALITY_TOL: f64 = 1e-10;

/// Real perturbation fields (rho, h) at a time instant. Stored in frequency
/// representation; rho is mean-free (neutrality) and both are conjugate
/// symmetric (reality).
#[derive(Debug, Clone)]
pub struct PerturbationState {
    rho: SpectralField,
    h: SpectralField,
    time: f64,
}

impl PerturbationState {
    pub fn new(rho: SpectralField, h: SpectralField, time: f64) -> Result<Self> {
        let mut rho = rho.to_frequency();
        let mut h = h.to_frequency();
        if rho.grid().as_ref() != h.grid().as_ref() {
            return Err(Error::InvalidInput("rho and h live on different grids".into()));
        }
        let scale = rho.l2_norm().max(1.0) * rho.grid().domain_length().powi(2);
        if rho.mean_mode().norm() > NEUTRALITY_TOL * scale {
            return Err(Error::InvalidInput(format!(
                "state is not neutral: |rho_hat(0)| = {}",
                rho.mean_mode().norm()
            )));
        }
        for (name, f) in [("rho", &rho), ("h", &h)] {
            let defect = f.reality_defect();
            if defect > 1e-8 {
                return Err(Error::InvalidInput(format!(
                    "{name} is not real-valued: conjugate-symmetry defect {defect}"
                )));
            }
        }
        rho.zero_mean();
        // the constant part of a velocity potential is gauge; drop it
        h.zero_mean();
        Ok(PerturbationState { rho, h, time })
    }

    pub fn equilibrium(grid: &std::sync::Arc<crate::grid::Grid>) -> Self {
        PerturbationState {
            rho: SpectralField::zeros(grid, Representation::Frequency),
            h: SpectralField::zeros(grid, Representation::Frequency),
            time: 0.0,
        }
    }

    pub fn rho(&self) -> &SpectralField {
        &self.rho
    }

    pub fn h(&self) -> &SpectralField {
        &self.h
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn grid(&self) -> &std::sync::Arc<crate::grid::Grid> {
        self.rho.grid()
    }

    /// Velocity components v_j = d_j h (frequency representation).
    pub fn velocity(&self) -> [SpectralField; 2] {
        let v1 = self
            .h
            .apply_multiplier(|xi| Complex64::new(0.0, xi[0]))
            .expect("finite");
        let v2 = self
            .h
            .apply_multiplier(|xi| Complex64::new(0.0, xi[1]))
            .expect("finite");
        [v1, v2]
    }
}

/// The diagonalized complex unknown U (frequency representation, mean-free).
#[derive(Debug, Clone)]
pub struct ComplexUnknown {
    u: SpectralField,
}

impl ComplexUnknown {
    pub fn new(u: SpectralField) -> Result<Self> {
        let u = u.to_frequency();
        if u.values()[0].norm() > NEUTRALITY_TOL * u.l2_norm().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "U has a mean mode of size {}",
                u.values()[0].norm()
            )));
        }
        Ok(ComplexUnknown { u })
    }

    pub fn field(&self) -> &SpectralField {
        &self.u
    }

    pub fn into_field(self) -> SpectralField {
        self.u
    }

    pub fn grid(&self) -> &std::sync::Arc<crate::grid::Grid> {
        self.u.grid()
    }

    /// X = Re U and Y = Im U as frequency-space fields.
    pub fn real_imag(&self) -> (SpectralField, SpectralField) {
        let flip = self.u.conj_transform();
        let mut x = self.u.clone();
        x.add_scaled(Complex64::new(1.0, 0.0), &flip);
        x.scale(Complex64::new(0.5, 0.0));
        let mut y = self.u.clone();
        y.add_scaled(Complex64::new(-1.0, 0.0), &flip);
        y.scale(Complex64::new(0.0, -0.5));
        (x, y)
    }
}

/// U = Lambda |nabla|^{-1} rho + i |nabla| h.
pub fn to_unknown(s: &PerturbationState) -> Result<ComplexUnknown> {
    let g = s.grid().clone();
    let (a, b) = (g.a(), g.b());
    let part1 = s.rho.apply_multiplier(|xi| {
        let r = xi[0].hypot(xi[1]);
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(crate::dispersion::lambda_eval(xi, a, b) / r, 0.0)
        }
    })?;
    let mut u = s.h.apply_multiplier(|xi| Complex64::new(0.0, xi[0].hypot(xi[1])))?;
    u.add_scaled(Complex64::new(1.0, 0.0), &part1);
    ComplexUnknown::new(u)
}

/// rho = Lambda^{-1} |nabla| Re U, h_hat = (Im U)^ / |xi|.
pub fn to_state(u: &ComplexUnknown, time: f64) -> Result<PerturbationState> {
    let g = u.grid().clone();
    let (a, b) = (g.a(), g.b());
    let (x, y) = u.real_imag();
    let rho = x.apply_multiplier(|xi| {
        let r = xi[0].hypot(xi[1]);
        Complex64::new(r / crate::dispersion::lambda_eval(xi, a, b), 0.0)
    })?;
    let h = y.apply_multiplier(|xi| {
        let r = xi[0].hypot(xi[1]);
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0 / r, 0.0)
        }
    })?;
    PerturbationState::new(rho, h, time)
}

/// The quadratic right-hand side of the U equation, evaluated with Fourier
/// multipliers and pointwise physical-space products, then dealiased and
/// mean-pinned. Input and output in frequency representation.
pub fn nonlinearity_physical(u: &ComplexUnknown) -> SpectralField {
    let g = u.grid().clone();
    let (a, b) = (g.a(), g.b());
    let uh = u.field();
    let ubh = uh.conj_transform();

    let mut sum = uh.clone();
    sum.add_scaled(Complex64::new(1.0, 0.0), &ubh);
    let mut diff = uh.clone();
    diff.add_scaled(Complex64::new(-1.0, 0.0), &ubh);

    // A = |nabla| Lambda^{-1} (U + Ubar), B_j = R_j (U - Ubar)
    let av = sum
        .apply_multiplier(|xi| {
            let r = xi[0].hypot(xi[1]);
            Complex64::new(r / crate::dispersion::lambda_eval(xi, a, b), 0.0)
        })
        .expect("finite")
        .to_physical();
    let riesz = |j: usize| {
        diff.apply_multiplier(move |xi| {
            let r = xi[0].hypot(xi[1]);
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, xi[j] / r)
            }
        })
        .expect("finite")
        .to_physical()
    };
    let b1 = riesz(0);
    let b2 = riesz(1);

    // t1 = sum_j Lambda R_j [A . B_j]
    let mut t1 = SpectralField::zeros(&g, Representation::Frequency);
    for (j, bj) in [&b1, &b2].into_iter().enumerate() {
        let prod = av.pointwise_mul(bj).to_frequency();
        let term = prod
            .apply_multiplier(|xi| {
                let r = xi[0].hypot(xi[1]);
                let lam = crate::dispersion::lambda_eval(xi, a, b);
                if r == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, lam * xi[j] / r)
                }
            })
            .expect("finite");
        t1.add_scaled(Complex64::new(1.0, 0.0), &term);
    }

    // t2 = |nabla| [B . B]
    let mut bb = b1.pointwise_mul(&b1);
    bb.add_scaled(Complex64::new(1.0, 0.0), &b2.pointwise_mul(&b2));
    let t2 = bb
        .to_frequency()
        .apply_multiplier(|xi| Complex64::new(xi[0].hypot(xi[1]), 0.0))
        .expect("finite");

    let mut out = t1;
    out.scale(Complex64::new(0.0, 0.25));
    out.add_scaled(Complex64::new(0.0, 0.125), &t2);
    out.dealias();
    out.zero_mean();
    out
}

/// Oracle implementation: direct lattice quadrature of the three bilinear
/// frequency integrals. O(N^4); guarded to N <= 64.
pub fn nonlinearity_spectral(u: &ComplexUnknown) -> Result<SpectralField> {
    let g = u.grid().clone();
    let n = g.n();
    if n > 64 {
        return Err(Error::InvalidInput(format!(
            "spectral-form nonlinearity is O(N^4) and guarded to N <= 64, got {n}"
        )));
    }
    let p = SymbolParams::new(g.a(), g.b());
    let uh = u.field();
    let ubh = uh.conj_transform();
    let cell = g.dxi() * g.dxi();
    let cutoff = 2.0 / 3.0 * (n / 2) as f64;

    let values: Vec<Complex64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let k = [g.mode(i), g.mode(j)];
            if k[0].unsigned_abs() as f64 > cutoff || k[1].unsigned_abs() as f64 > cutoff {
                return Complex64::new(0.0, 0.0);
            }
            let xi = g.xi(i, j);
            let mut acc = Complex64::new(0.0, 0.0);
            for ei in 0..n {
                for ej in 0..n {
                    let eta = g.xi(ei, ej);
                    let kd = [k[0] - g.mode(ei), k[1] - g.mode(ej)];
                    let (di, dj) = match (g.index_of_mode(kd[0]), g.index_of_mode(kd[1])) {
                        (Some(di), Some(dj)) => (di, dj),
                        _ => continue,
                    };
                    for (sig, f, h) in [
                        (BilinearSig::PP, uh.at(di, dj), uh.at(ei, ej)),
                        (BilinearSig::PM, uh.at(di, dj), ubh.at(ei, ej)),
                        (BilinearSig::MM, ubh.at(di, dj), ubh.at(ei, ej)),
                    ] {
                        let m = bilinear_symbol(sig, xi, eta, &p);
                        if m.norm_sqr() == 0.0 {
                            continue;
                        }
                        acc += m * f * h;
                    }
                }
            }
            acc * cell
        })
        .collect();
    let mut out = SpectralField::from_values(&g, values, Representation::Frequency)?;
    out.zero_mean();
    Ok(out)
}

/// The conserved physical energy
///   E = 1/2 int [ n |v|^2 + a (n - 1)^2 + b |grad phi|^2 ] dx,
/// with the electrostatic potential determined by Delta phi = rho (mean mode
/// excluded).
pub fn conserved_energy(s: &PerturbationState) -> f64 {
    let rho_p = s.rho.to_physical();
    let [v1, v2] = s.velocity();
    let (v1p, v2p) = (v1.to_physical(), v2.to_physical());
    let gphi = |j: usize| {
        s.rho
            .apply_multiplier(move |xi| {
                let r2 = xi[0] * xi[0] + xi[1] * xi[1];
                if r2 == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, -xi[j] / r2)
                }
            })
            .expect("finite")
            .to_physical()
    };
    let (g1, g2) = (gphi(0), gphi(1));
    let a = s.grid().a();
    let b = s.grid().b();
    let dx2 = s.grid().dx() * s.grid().dx();
    let mut e = 0.0;
    for idx in 0..s.grid().len() {
        let rho = rho_p.values()[idx].re;
        let n = 1.0 + rho;
        let vv = v1p.values()[idx].re.powi(2) + v2p.values()[idx].re.powi(2);
        let gg = g1.values()[idx].re.powi(2) + g2.values()[idx].re.powi(2);
        e += n * vv + a * rho * rho + b * gg;
    }
    0.5 * e * dx2
}

/// Independent second route: quadratic part via Parseval in frequency space
/// plus the cubic term rho |v|^2 in physical space.
pub fn conserved_energy_spectral(s: &PerturbationState) -> f64 {
    let g = s.grid();
    let a = g.a();
    let b = g.b();
    let l2 = g.domain_length() * g.domain_length();
    let rho = s.rho.to_frequency();
    let h = s.h.to_frequency();
    let mut quad = 0.0;
    for idx in 0..g.len() {
        let xi = g.xi_flat(idx);
        let r2 = xi[0] * xi[0] + xi[1] * xi[1];
        let rr = rho.values()[idx].norm_sqr();
        let hh = h.values()[idx].norm_sqr();
        // |v|^2 contributes |xi|^2 |h_hat|^2, |grad phi|^2 contributes
        // |rho_hat|^2 / |xi|^2
        quad += r2 * hh + a * rr + if r2 == 0.0 { 0.0 } else { b * rr / r2 };
    }
    quad /= l2;
    let rho_p = s.rho.to_physical();
    let [v1, v2] = s.velocity();
    let (v1p, v2p) = (v1.to_physical(), v2.to_physical());
    let dx2 = g.dx() * g.dx();
    let mut cubic = 0.0;
    for idx in 0..g.len() {
        let vv = v1p.values()[idx].re.powi(2) + v2p.values()[idx].re.powi(2);
        cubic += rho_p.values()[idx].re * vv;
    }
    cubic *= dx2;
    0.5 * (quad + cubic)
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Diagnostics {
    pub neutrality_residual: f64,
    pub curl_residual: f64,
    pub min_density: f64,
}

pub fn diagnostics(s: &PerturbationState) -> Diagnostics {
    let neutrality_residual = s.rho.mean_mode().norm();
    let [v1, v2] = s.velocity();
    // curl v = d1 v2 - d2 v1
    let c1 = v2
        .apply_multiplier(|xi| Complex64::new(0.0, xi[0]))
        .expect("finite");
    let c2 = v1
        .apply_multiplier(|xi| Complex64::new(0.0, xi[1]))
        .expect("finite");
    let curl_residual = c1.sub(&c2).l2_norm();
    let rho_p = s.rho.to_physical();
    let min_density = rho_p
        .values()
        .iter()
        .map(|v| 1.0 + v.re)
        .fold(f64::INFINITY, f64::min);
    Diagnostics {
        neutrality_residual,
        curl_residual,
        min_density,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn real_random_field(g: &Arc<Grid>, seed: u64, amp: f64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpectralField::from_values(
            g,
            (0..g.len())
                .map(|_| Complex64::new(amp * (rng.gen::<f64>() - 0.5), 0.0))
                .collect(),
            Representation::Physical,
        )
        .unwrap();
        f.make_frequency();
        f.zero_mean();
        f.dealias();
        f
    }

    fn random_unknown(g: &Arc<Grid>, seed: u64, amp: f64, band: i64) -> ComplexUnknown {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = g.n();
        let mut f = SpectralField::zeros(g, Representation::Frequency);
        for i in 0..n {
            for j in 0..n {
                if g.mode(i).abs() <= band && g.mode(j).abs() <= band && (i, j) != (0, 0) {
                    f.values_mut()[i * n + j] =
                        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * amp;
                }
            }
        }
        f.dealias();
        ComplexUnknown::new(f).unwrap()
    }

    #[test]
    fn rejects_non_neutral_state() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let rho = SpectralField::from_fn_physical(&g, |_| Complex64::new(0.3, 0.0));
        let h = SpectralField::zeros(&g, Representation::Frequency);
        assert!(PerturbationState::new(rho, h, 0.0).is_err());
    }

    #[test]
    fn unknown_round_trip() {
        let g = Grid::new(32, 16.0, 1.0, 1.0).unwrap();
        let rho = real_random_field(&g, 51, 0.01);
        let h = real_random_field(&g, 52, 0.01);
        let s = PerturbationState::new(rho, h, 1.5).unwrap();
        let u = to_unknown(&s).unwrap();
        let back = to_state(&u, 1.5).unwrap();
        let er = back.rho().sub(s.rho()).l2_norm() / s.rho().l2_norm();
        let eh = back.h().sub(s.h()).l2_norm() / s.h().l2_norm();
        assert!(er < 1e-12, "rho error {er}");
        assert!(eh < 1e-12, "h error {eh}");
        let u2 = to_unknown(&back).unwrap();
        let eu = u2.field().sub(u.field()).l2_norm() / u.field().l2_norm();
        assert!(eu < 1e-12);
    }

    #[test]
    fn single_mode_unknown_value() {
        // rho_hat supported at |xi0| = 1 with a = b = 1 gives U_hat = sqrt(2) rho_hat
        let g = Grid::new(32, 2.0 * std::f64::consts::PI, 1.0, 1.0).unwrap();
        let n = g.n();
        let mut rho = SpectralField::zeros(&g, Representation::Frequency);
        rho.values_mut()[n] = Complex64::new(1.0, 0.0);
        rho.values_mut()[(n - 1) * n] = Complex64::new(1.0, 0.0);
        let h = SpectralField::zeros(&g, Representation::Frequency);
        let s = PerturbationState::new(rho, h, 0.0).unwrap();
        let u = to_unknown(&s).unwrap();
        let v = u.field().at(1, 0);
        assert!((v - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pure_imaginary_mode_decouples() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let mut uf = SpectralField::zeros(&g, Representation::Frequency);
        // a conjugate-symmetric pure-imaginary-U pattern: U_hat(k) = i c, U_hat(-k) = i c
        uf.values_mut()[g.n()] = Complex64::new(0.0, 1.0);
        uf.values_mut()[(g.n() - 1) * g.n()] = Complex64::new(0.0, 1.0);
        let u = ComplexUnknown::new(uf).unwrap();
        let s = to_state(&u, 0.0).unwrap();
        assert!(s.rho().l2_norm() < 1e-14);
        assert!(s.h().l2_norm() > 0.0);
    }

    #[test]
    fn nonlinearity_vanishes_for_real_u() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let f = real_random_field(&g, 53, 0.1);
        let u = ComplexUnknown::new(f).unwrap();
        let nl = nonlinearity_physical(&u);
        assert!(nl.l2_norm() < 1e-13);
        let ns = nonlinearity_spectral(&u).unwrap();
        assert!(ns.l2_norm() < 1e-13);
    }

    #[test]
    fn nonlinearity_quadratic_homogeneity() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let u = random_unknown(&g, 54, 0.1, 4);
        let mut doubled = u.field().clone();
        doubled.scale(Complex64::new(2.0, 0.0));
        let u2 = ComplexUnknown::new(doubled).unwrap();
        let n1 = nonlinearity_physical(&u);
        let n2 = nonlinearity_physical(&u2);
        let mut n1x4 = n1.clone();
        n1x4.scale(Complex64::new(4.0, 0.0));
        assert!(n2.sub(&n1x4).l2_norm() / n2.l2_norm() < 1e-12);
    }

    #[test]
    fn nonlinearity_oracle_equivalence() {
        let g = Grid::new(32, 32.0, 1.0, 1.0).unwrap();
        for seed in 0..3 {
            let u = random_unknown(&g, 100 + seed, 0.01, 6);
            let np = nonlinearity_physical(&u);
            let ns = nonlinearity_spectral(&u).unwrap();
            let rel = np.sub(&ns).l2_norm() / np.l2_norm();
            assert!(rel < 1e-10, "seed {seed}: relative difference {rel}");
        }
    }

    #[test]
    fn nonlinearity_spectral_guards_large_grids() {
        let g = Grid::new(128, 32.0, 1.0, 1.0).unwrap();
        let u = random_unknown(&g, 55, 0.01, 3);
        assert!(nonlinearity_spectral(&u).is_err());
    }

    #[test]
    fn reality_propagates_through_nonlinearity() {
        let g = Grid::new(32, 32.0, 1.0, 1.0).unwrap();
        let rho = real_random_field(&g, 56, 0.01);
        let h = real_random_field(&g, 57, 0.01);
        let s = PerturbationState::new(rho, h, 0.0).unwrap();
        let u = to_unknown(&s).unwrap();
        let nl = nonlinearity_physical(&u);
        // the RHS maps back to real rho, h: check the reconstructed fields
        let w = ComplexUnknown::new(nl).unwrap();
        let back = to_state(&w, 0.0).unwrap();
        assert!(back.rho().reality_defect() < 1e-10);
        assert!(back.h().reality_defect() < 1e-10);
    }

    #[test]
    fn energy_zero_at_equilibrium_and_positive_nearby() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let eq = PerturbationState::equilibrium(&g);
        assert_eq!(conserved_energy(&eq), 0.0);
        for seed in 0..5 {
            let rho = real_random_field(&g, 60 + seed, 0.05);
            let h = real_random_field(&g, 70 + seed, 0.05);
            let s = PerturbationState::new(rho, h, 0.0).unwrap();
            assert!(conserved_energy(&s) > 0.0);
        }
    }

    #[test]
    fn energy_single_mode_h_matches_parseval() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let h = {
            let dxi = g.dxi();
            let mut f =
                SpectralField::from_fn_physical(&g, |x| Complex64::new((dxi * x[0]).cos(), 0.0));
            f.make_frequency();
            f
        };
        let rho = SpectralField::zeros(&g, Representation::Frequency);
        let s = PerturbationState::new(rho, h, 0.0).unwrap();
        // E = 1/2 int |grad h|^2 = 1/2 * dxi^2 * (L^2 / 2)
        let expect = 0.25 * g.dxi() * g.dxi() * g.domain_length() * g.domain_length();
        let e = conserved_energy(&s);
        assert!((e - expect).abs() / expect < 1e-12, "{e} vs {expect}");
    }

    #[test]
    fn energy_routes_agree() {
        let g = Grid::new(32, 16.0, 1.0, 1.0).unwrap();
        let rho = real_random_field(&g, 80, 0.02);
        let h = real_random_field(&g, 81, 0.02);
        let s = PerturbationState::new(rho, h, 0.0).unwrap();
        let e1 = conserved_energy(&s);
        let e2 = conserved_energy_spectral(&s);
        assert!((e1 - e2).abs() / e1 < 1e-10, "{e1} vs {e2}");
    }

    #[test]
    fn diagnostics_report() {
        let g = Grid::new(16, 8.0, 1.0, 1.0).unwrap();
        let eq = PerturbationState::equilibrium(&g);
        let d = diagnostics(&eq);
        assert_eq!(d.neutrality_residual, 0.0);
        assert_eq!(d.curl_residual, 0.0);
        assert_eq!(d.min_density, 1.0);

        let rho = real_random_field(&g, 90, 0.1);
        let h = real_random_field(&g, 91, 0.1);
        let s = PerturbationState::new(rho, h, 0.0).unwrap();
        let d = diagnostics(&s);
        assert!(d.neutrality_residual < 1e-12);
        assert!(d.curl_residual < 1e-12);
        assert!(d.min_density < 1.0);
    }
}
