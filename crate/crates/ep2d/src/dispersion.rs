//! Dispersion relation Lambda, bilinear and trilinear phase functions, the
//! exact linear propagator, and sampled certification of the phase
//! inequalities that license the normal form.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::SpectralField;
use crate::Result;

/// Lambda(xi) = sqrt(a |xi|^2 + b).
pub fn lambda_eval(xi: [f64; 2], a: f64, b: f64) -> f64 {
    (a * (xi[0] * xi[0] + xi[1] * xi[1]) + b).sqrt()
}

/// grad Lambda(xi) = a xi / Lambda(xi).
pub fn grad_lambda(xi: [f64; 2], a: f64, b: f64) -> [f64; 2] {
    let l = lambda_eval(xi, a, b);
    [a * xi[0] / l, a * xi[1] / l]
}

/// Sign pairs (mu, nu) appearing in the bilinear sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BilinearSig {
    PP,
    PM,
    MM,
}

impl BilinearSig {
    pub const ALL: [BilinearSig; 3] = [BilinearSig::PP, BilinearSig::PM, BilinearSig::MM];

    pub fn mu(self) -> f64 {
        match self {
            BilinearSig::PP | BilinearSig::PM => 1.0,
            BilinearSig::MM => -1.0,
        }
    }

    pub fn nu(self) -> f64 {
        match self {
            BilinearSig::PP => 1.0,
            BilinearSig::PM | BilinearSig::MM => -1.0,
        }
    }
}

/// Sign triples (mu, nu, sigma) appearing in the cubic sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrilinearSig {
    PPP,
    PPM,
    PMM,
    MMM,
}

impl TrilinearSig {
    pub const ALL: [TrilinearSig; 4] = [
        TrilinearSig::PPP,
        TrilinearSig::PPM,
        TrilinearSig::PMM,
        TrilinearSig::MMM,
    ];

    /// The elliptic signatures: the trilinear phase is bounded away from zero.
    pub const ELLIPTIC: [TrilinearSig; 3] =
        [TrilinearSig::PPP, TrilinearSig::PMM, TrilinearSig::MMM];

    pub fn signs(self) -> (f64, f64, f64) {
        match self {
            TrilinearSig::PPP => (1.0, 1.0, 1.0),
            TrilinearSig::PPM => (1.0, 1.0, -1.0),
            TrilinearSig::PMM => (1.0, -1.0, -1.0),
            TrilinearSig::MMM => (-1.0, -1.0, -1.0),
        }
    }
}

/// Phi_{mu nu}(xi, eta) = Lambda(xi) - mu Lambda(xi - eta) - nu Lambda(eta).
pub fn phase_bilinear(sig: BilinearSig, xi: [f64; 2], eta: [f64; 2], a: f64, b: f64) -> f64 {
    let xmn = [xi[0] - eta[0], xi[1] - eta[1]];
    lambda_eval(xi, a, b) - sig.mu() * lambda_eval(xmn, a, b) - sig.nu() * lambda_eval(eta, a, b)
}

/// Phi_{mu nu sigma}(xi, eta, chi) =
/// Lambda(xi) - mu Lambda(xi - eta) - nu Lambda(eta - chi) - sigma Lambda(chi).
pub fn phase_trilinear(
    sig: TrilinearSig,
    xi: [f64; 2],
    eta: [f64; 2],
    chi: [f64; 2],
    a: f64,
    b: f64,
) -> f64 {
    let (mu, nu, sg) = sig.signs();
    let xmn = [xi[0] - eta[0], xi[1] - eta[1]];
    let nmc = [eta[0] - chi[0], eta[1] - chi[1]];
    lambda_eval(xi, a, b)
        - mu * lambda_eval(xmn, a, b)
        - nu * lambda_eval(nmc, a, b)
        - sg * lambda_eval(chi, a, b)
}

/// Gradient of Phi_{mu nu} with respect to (xi, eta), as a 4-vector.
pub fn grad_phase_bilinear(
    sig: BilinearSig,
    xi: [f64; 2],
    eta: [f64; 2],
    a: f64,
    b: f64,
) -> [f64; 4] {
    let xmn = [xi[0] - eta[0], xi[1] - eta[1]];
    let gx = grad_lambda(xi, a, b);
    let gm = grad_lambda(xmn, a, b);
    let ge = grad_lambda(eta, a, b);
    let (mu, nu) = (sig.mu(), sig.nu());
    [
        gx[0] - mu * gm[0],
        gx[1] - mu * gm[1],
        mu * gm[0] - nu * ge[0],
        mu * gm[1] - nu * ge[1],
    ]
}

/// Apply e^{-i sign t Lambda} in frequency space; unitary on L^2.
pub fn propagate_linear(f: &SpectralField, t: f64, sign: i8) -> SpectralField {
    let a = f.grid().a();
    let b = f.grid().b();
    let s = sign as f64;
    f.apply_multiplier(|xi| {
        let phase = -s * t * lambda_eval(xi, a, b);
        Complex64::new(phase.cos(), phase.sin())
    })
    .expect("propagator is finite")
}

/// One certified inequality: the extremal sampled ratio against its frozen
/// budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub name: String,
    pub samples: usize,
    pub max_ratio: f64,
    pub argmax: Vec<[f64; 2]>,
    pub budget: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub a: f64,
    pub b: f64,
    pub seed: u64,
    pub entries: Vec<CertificateEntry>,
    pub pass: bool,
}

/// Frozen ratio budgets for a = b = 1, calibrated once from a 10^7-sample
/// sweep and held fixed as regression baselines (observed extrema times a
/// 1.25 headroom factor).
pub mod budgets {
    /// Second differences of Lambda at radius R, scaled by R: max/min spread.
    pub const LA1_SPREAD: f64 = 4.0;
    /// 1 / (|Lambda(x) +- Lambda(y) +- Lambda(x+y)| (1 + min)).
    pub const LA2: f64 = 2.5;
    /// (|x-y| / (1 + |x|^3 + |y|^3)) / |grad Lambda(x) - grad Lambda(y)|.
    pub const LA3_LOWER: f64 = 1.4;
    /// |grad Lambda(x) - grad Lambda(y)| / |x - y|.
    pub const LA3_UPPER: f64 = 1.05;
    /// |grad_{xi,eta} Phi| / |Phi| over the three bilinear signatures.
    pub const LA4: f64 = 3.7;
    /// 1 / (|Phi_{mu nu sigma}| (1 + min of the four frequencies)), elliptic
    /// signatures only.
    pub const NH20: f64 = 2.4;
}

struct Extremum {
    max_ratio: f64,
    argmax: Vec<[f64; 2]>,
    samples: usize,
}

impl Extremum {
    fn new() -> Self {
        Extremum {
            max_ratio: 0.0,
            argmax: Vec::new(),
            samples: 0,
        }
    }

    fn update(&mut self, ratio: f64, point: &[[f64; 2]]) {
        self.samples += 1;
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.argmax = point.to_vec();
        }
    }

    fn entry(self, name: &str, budget: f64) -> CertificateEntry {
        CertificateEntry {
            name: name.to_string(),
            samples: self.samples,
            pass: self.max_ratio <= budget,
            max_ratio: self.max_ratio,
            argmax: self.argmax,
            budget,
        }
    }
}

fn sample_point(rng: &mut ChaCha8Rng, r_max_log2: f64) -> [f64; 2] {
    // log-uniform radius in [2^-10, 2^r_max_log2], uniform direction
    let e = rng.gen_range(-10.0..r_max_log2);
    let r = 2f64.powf(e);
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    [r * th.cos(), r * th.sin()]
}

fn perturb(rng: &mut ChaCha8Rng, x: [f64; 2], scale: f64) -> [f64; 2] {
    [
        x[0] + scale * rng.gen_range(-1.0..1.0),
        x[1] + scale * rng.gen_range(-1.0..1.0),
    ]
}

fn norm2(x: [f64; 2]) -> f64 {
    x[0].hypot(x[1])
}

/// Sample the phase inequalities and report extremal ratios against the
/// frozen budgets. Deterministic for a given seed.
pub fn certify_phase_bounds(
    a: f64,
    b: f64,
    n_samples: usize,
    seed: u64,
    r_max_log2: f64,
) -> Result<CertificateReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut la2 = Extremum::new();
    let mut la3_lo = Extremum::new();
    let mut la3_hi = Extremum::new();
    let mut la4 = Extremum::new();
    let mut nh20 = Extremum::new();

    for i in 0..n_samples {
        // mixture: plain log-uniform pairs, and stressed near-degenerate
        // configurations (small eta, collinear, nearly equal arguments)
        let stressed = i % 2 == 1;
        let x = sample_point(&mut rng, r_max_log2);
        let y = if !stressed {
            sample_point(&mut rng, r_max_log2)
        } else {
            let tiny = 2f64.powf(rng.gen_range(-12.0..0.0));
            match i % 8 {
                1 => perturb(&mut rng, [0.0, 0.0], tiny),
                3 => {
                    let s: f64 = rng.gen_range(-2.0..2.0);
                    perturb(&mut rng, [s * x[0], s * x[1]], 1e-6)
                }
                5 => perturb(&mut rng, x, tiny),
                _ => perturb(&mut rng, [-x[0], -x[1]], tiny),
            }
        };

        // (la2): reciprocal of |Lambda(x) +- Lambda(y) +- Lambda(x+y)|
        let xpy = [x[0] + y[0], x[1] + y[1]];
        let (lx, ly, ls) = (
            lambda_eval(x, a, b),
            lambda_eval(y, a, b),
            lambda_eval(xpy, a, b),
        );
        let fl = 1.0 + norm2(x).min(norm2(y)).min(norm2(xpy));
        for expr in [lx + ly - ls, lx - ly + ls, lx - ly - ls, lx + ly + ls] {
            if expr.abs() > 0.0 {
                la2.update(1.0 / (expr.abs() * fl), &[x, y]);
            }
        }

        // (la3): lower and upper comparison of |grad L(x) - grad L(y)| with |x-y|
        let d = norm2([x[0] - y[0], x[1] - y[1]]);
        if d > 1e-9 {
            let gx = grad_lambda(x, a, b);
            let gy = grad_lambda(y, a, b);
            let gd = norm2([gx[0] - gy[0], gx[1] - gy[1]]);
            let lower = d / (1.0 + norm2(x).powi(3) + norm2(y).powi(3));
            if gd > 0.0 {
                la3_lo.update(lower / gd, &[x, y]);
            }
            la3_hi.update(gd / d, &[x, y]);
        }

        // (la4): |grad Phi| / |Phi| with (xi, eta) = (x, y)
        for sig in BilinearSig::ALL {
            let phi = phase_bilinear(sig, x, y, a, b);
            let g = grad_phase_bilinear(sig, x, y, a, b);
            let gn = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]).sqrt();
            if phi.abs() > 0.0 {
                la4.update(gn / phi.abs(), &[x, y]);
            }
        }

        // (nh20): trilinear ellipticity; chi drawn fresh, plus collinear stress
        let chi = if stressed {
            let s: f64 = rng.gen_range(-2.0..2.0);
            perturb(&mut rng, [s * y[0], s * y[1]], 1e-6)
        } else {
            sample_point(&mut rng, r_max_log2)
        };
        let fl3 = 1.0
            + norm2(x)
                .min(norm2([x[0] - y[0], x[1] - y[1]]))
                .min(norm2([y[0] - chi[0], y[1] - chi[1]]))
                .min(norm2(chi));
        for sig in TrilinearSig::ELLIPTIC {
            let phi = phase_trilinear(sig, x, y, chi, a, b);
            if phi.abs() > 0.0 {
                nh20.update(1.0 / (phi.abs() * fl3), &[x, y, chi]);
            }
        }
    }

    // (la1): second differences of Lambda at radius R decay like 1/R for
    // second-order derivatives; the scaled spread over two decades is bounded.
    let mut la1 = Extremum::new();
    let hs = 1e-4;
    let mut scaled = Vec::new();
    for r in [1.0, 4.0, 16.0, 64.0] {
        for dir in [[1.0, 0.0], [std::f64::consts::FRAC_1_SQRT_2; 2]] {
            let x = [r * dir[0], r * dir[1]];
            let mut hess_max = 0.0f64;
            for (e1, e2) in [([hs, 0.0], [hs, 0.0]), ([0.0, hs], [0.0, hs]), ([hs, 0.0], [0.0, hs])]
            {
                let f = |p: [f64; 2]| lambda_eval(p, a, b);
                let d2 = (f([x[0] + e1[0] + e2[0], x[1] + e1[1] + e2[1]])
                    - f([x[0] + e1[0] - e2[0], x[1] + e1[1] - e2[1]])
                    - f([x[0] - e1[0] + e2[0], x[1] - e1[1] + e2[1]])
                    + f([x[0] - e1[0] - e2[0], x[1] - e1[1] - e2[1]]))
                    / (4.0 * hs * hs);
                hess_max = hess_max.max(d2.abs());
            }
            scaled.push((hess_max * r, x));
        }
    }
    let lo = scaled.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    for (v, x) in &scaled {
        la1.update(v / lo, &[*x]);
    }

    let entries = vec![
        la1.entry("la1_second_derivative_decay", budgets::LA1_SPREAD),
        la2.entry("la2_reciprocal_phase", budgets::LA2),
        la3_lo.entry("la3_lower", budgets::LA3_LOWER),
        la3_hi.entry("la3_upper", budgets::LA3_UPPER),
        la4.entry("la4_phase_gradient", budgets::LA4),
        nh20.entry("nh20_trilinear_ellipticity", budgets::NH20),
    ];
    let pass = entries.iter().all(|e| e.pass);
    Ok(CertificateReport {
        a,
        b,
        seed,
        entries,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Representation;
    use crate::grid::Grid;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lambda_reference_values() {
        assert!((lambda_eval([0.0, 0.0], 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((lambda_eval([1.0, 0.0], 1.0, 1.0) - 2f64.sqrt()).abs() < 1e-12);
        assert!((lambda_eval([1.0, 1.0], 2.0, 4.0) - 2.8284271247).abs() < 1e-9);
    }

    #[test]
    fn bilinear_phase_reference_values() {
        // Phi_pp(xi, 0) = -sqrt(b)
        let v = phase_bilinear(BilinearSig::PP, [3.0, -2.0], [0.0, 0.0], 1.0, 1.0);
        assert!((v + 1.0).abs() < 1e-14);
        // Phi_pm(xi, xi) = 2 Lambda(xi) - sqrt(b)
        let v = phase_bilinear(BilinearSig::PM, [1.0, 0.0], [1.0, 0.0], 1.0, 1.0);
        assert!((v - (2.0 * 2f64.sqrt() - 1.0)).abs() < 1e-14);
        // Phi_mm(0, 0) = 3 sqrt(b)
        let v = phase_bilinear(BilinearSig::MM, [0.0, 0.0], [0.0, 0.0], 1.0, 4.0);
        assert!((v - 6.0).abs() < 1e-14);
    }

    #[test]
    fn trilinear_phase_reference_values() {
        let v = phase_trilinear(TrilinearSig::PPP, [0.0; 2], [0.0; 2], [0.0; 2], 1.0, 1.0);
        assert!((v + 2.0).abs() < 1e-14);
        // Phi_ppm(xi, xi, 0) = 0: a resonant point of the non-elliptic signature
        let v = phase_trilinear(TrilinearSig::PPM, [2.0, 1.0], [2.0, 1.0], [0.0; 2], 1.0, 1.0);
        assert!(v.abs() < 1e-14);
        let v = phase_trilinear(
            TrilinearSig::PMM,
            [0.0; 2],
            [3.0, 0.0],
            [3.0, 0.0],
            1.0,
            1.0,
        );
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pm_phase_reflection_identity() {
        // Phi_pm(xi, eta) = -Phi_pp(xi - eta, xi)
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let xi = [rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)];
            let eta = [rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)];
            let lhs = phase_bilinear(BilinearSig::PM, xi, eta, 1.0, 2.0);
            let rhs = -phase_bilinear(
                BilinearSig::PP,
                [xi[0] - eta[0], xi[1] - eta[1]],
                xi,
                1.0,
                2.0,
            );
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_is_unitary_and_invertible() {
        let g = Grid::new(32, 16.0, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let mut f = SpectralField::zeros(&g, Representation::Frequency);
        for v in f.values_mut() {
            *v = num_complex::Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let t = 3.7;
        let ft = propagate_linear(&f, t, 1);
        assert!((ft.l2_norm() - f.l2_norm()).abs() / f.l2_norm() < 1e-12);
        let back = propagate_linear(&ft, -t, 1);
        assert!(back.sub(&f).l2_norm() / f.l2_norm() < 1e-12);
        let zero = propagate_linear(&f, 0.0, 1);
        assert!(zero.sub(&f).l2_norm() < 1e-14);
    }

    #[test]
    fn la2_hand_value() {
        // x = y = (1, 0), pattern (+, +): 1 / ((2 sqrt2 - sqrt5) * 2)
        let x = [1.0, 0.0];
        let expr = 2.0 * lambda_eval(x, 1.0, 1.0) - lambda_eval([2.0, 0.0], 1.0, 1.0);
        let ratio = 1.0 / (expr * 2.0);
        assert!((ratio - 1.0 / ((2.0 * 2f64.sqrt() - 5f64.sqrt()) * 2.0)).abs() < 1e-12);
        assert!(ratio < budgets::LA2);
    }

    #[test]
    fn la3_lower_hand_value() {
        // grad Lambda(x) = x / sqrt(2) at |x| = 1, a = b = 1
        let x = [1.0, 0.0];
        let y = [0.0, 1.0];
        let gx = grad_lambda(x, 1.0, 1.0);
        let gy = grad_lambda(y, 1.0, 1.0);
        let gd = norm2([gx[0] - gy[0], gx[1] - gy[1]]);
        let d = norm2([x[0] - y[0], x[1] - y[1]]);
        assert!((gd - d / 2f64.sqrt()).abs() < 1e-12);
        assert!(gd >= d / 3.0);
    }

    #[test]
    fn certificate_small_run_passes() {
        let rep = certify_phase_bounds(1.0, 1.0, 20_000, 7, 12.0).unwrap();
        assert!(rep.pass, "certificate entries: {:#?}", rep.entries);
        assert_eq!(rep.entries.len(), 6);
        // deterministic for fixed seed
        let rep2 = certify_phase_bounds(1.0, 1.0, 20_000, 7, 12.0).unwrap();
        for (e1, e2) in rep.entries.iter().zip(&rep2.entries) {
            assert_eq!(e1.max_ratio, e2.max_ratio);
        }
    }
}
