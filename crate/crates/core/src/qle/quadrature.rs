//! Independent evaluation of the weak-drive moments by direct time
//! integration of the closed-form correlators, with no exponential series.
//!
//! `⟨n_j⟩ = ∫∫ du du' g_j(u')* g_j(u) Φ₂(u − u')` with `g(u) = e^{−Mu}E`, and
//! the two-photon amplitude in phonon state `n` is
//! `X_n = ∫dv e^{−(Γ + inω)v} ∫du s(g(u)) W(u) (1 + e^{−iωu})^n λ^n/√n!`,
//! `W(u) = exp[iλ² sin ωu − λ²(1 + cos ωu)]` being the overlap of the twice
//! displaced vacuum.

use faer::Mat;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::engine::Reduced;
use super::phonon::{phonon_corr_2pt, PhononCorrelationSpec};
use crate::error::{Error, Result};
use crate::fock::polaron::expm_dense;
use crate::params::SystemParams;

const GL_ORDER: usize = 16;
const MAX_REFINEMENTS: usize = 5;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn composite_rule(t_max: f64, panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(GL_ORDER);
    let h = t_max / panels as f64;
    (0..panels)
        .flat_map(|k| {
            x.iter().zip(&w).map(move |(xi, wi)| (h * (k as f64 + 0.5 * (xi + 1.0)), 0.5 * h * wi))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub g2_1: Option<f64>,
    pub g2_2: Option<f64>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub relative_photons: (f64, f64),
    /// Nodes per time axis in the accepted rule.
    pub nodes: usize,
}

// e^{−Mu} for a 2 × 2 matrix.
fn expm2(m: [[C64; 2]; 2], u: f64) -> [[C64; 2]; 2] {
    let t = 0.5 * (m[0][0] + m[1][1]);
    let d = 0.5 * (m[0][0] - m[1][1]);
    let s = (d * d + m[0][1] * m[1][0]).sqrt();
    let (ch, sh) = if s.norm() * u.max(1.0) < 1e-12 {
        (C64::new(1.0, 0.0), C64::new(u, 0.0))
    } else {
        ((s * u).cosh(), (s * u).sinh() / s)
    };
    let f = (-t * u).exp();
    [
        [f * (ch - sh * d), -f * sh * m[0][1]],
        [-f * sh * m[1][0], f * (ch + sh * d)],
    ]
}

struct Raw {
    photons: [f64; 2],
    pairs: [f64; 2],
}

fn evaluate(red: &Reduced, n_two: usize, rule: &[(f64, f64)]) -> Raw {
    let w = red.omega;
    let l2 = red.lambda * red.lambda;
    let spec = PhononCorrelationSpec { lambda: red.lambda, m_max: 1, omega_m: w };
    let m1 = red.one_photon_matrix(0.0);
    let g: Vec<[C64; 2]> = rule
        .iter()
        .map(|&(u, _)| {
            let e = expm2(m1, u);
            [e[0][0] * red.e[0] + e[0][1] * red.e[1], e[1][0] * red.e[0] + e[1][1] * red.e[1]]
        })
        .collect();

    let mut photons = [0.0; 2];
    for (a, &(ua, wa)) in rule.iter().enumerate() {
        let mut acc = [C64::new(0.0, 0.0); 2];
        for (b, &(ub, wb)) in rule.iter().enumerate() {
            let phi = wb * phonon_corr_2pt(&spec, ua - ub);
            for j in 0..2 {
                acc[j] += g[b][j].conj() * phi;
            }
        }
        for j in 0..2 {
            photons[j] += (wa * g[a][j] * acc[j]).re;
        }
    }

    // ∫du s(g(u)) W(u) (1 + e^{−iωu})^n λ^n/√n!
    let mut sources = vec![[C64::new(0.0, 0.0); 3]; n_two];
    for (k, &(u, wu)) in rule.iter().enumerate() {
        let (sn, cs) = (w * u).sin_cos();
        let overlap = C64::new(-l2 * (1.0 + cs), l2 * sn).exp();
        let q = C64::new(1.0, 0.0) + C64::new(0.0, -w * u).exp();
        let src = red.source(g[k]);
        let mut fac = wu * overlap;
        for (n, s) in sources.iter_mut().enumerate() {
            if n > 0 {
                fac *= q * red.lambda / (n as f64).sqrt();
            }
            for c in 0..3 {
                s[c] += fac * src[c];
            }
        }
    }

    // ∫dv e^{−Γv} e^{−inωv}
    let gam = red.two_photon_matrix(0.0);
    let neg = Mat::<C64>::from_fn(3, 3, |r, c| -gam[r][c]);
    let mut kernels = vec![Mat::<C64>::zeros(3, 3); n_two];
    for &(v, wv) in rule {
        let e = expm_dense(&Mat::<C64>::from_fn(3, 3, |r, c| neg[(r, c)] * v));
        for (n, k) in kernels.iter_mut().enumerate() {
            let f = wv * C64::new(0.0, -(n as f64) * w * v).exp();
            for r in 0..3 {
                for c in 0..3 {
                    k[(r, c)] += f * e[(r, c)];
                }
            }
        }
    }
    let mut pairs = [0.0; 2];
    for n in 0..n_two {
        for j in 0..2 {
            let x: C64 = (0..3).map(|c| kernels[n][(j, c)] * sources[n][c]).sum();
            pairs[j] += x.norm_sqr();
        }
    }
    Raw { photons, pairs }
}

/// Certification path for the series engine: `g_j²(0)` from nested time
/// integrals of the closed-form correlators, resummed in `J`.
///
/// The two-photon phonon cutoff is `2 m_max`, as in the series engine, so the
/// comparison isolates the time integrals. Integration stops at `t_max`
/// (default `40/min κ`) and the rule is refined by doubling until the moments
/// change by less than `tol` relative.
pub fn quadrature_oracle_g2(
    params: &SystemParams,
    m_max: usize,
    t_max: Option<f64>,
    tol: f64,
) -> Result<QuadratureResult> {
    if m_max < 1 {
        return Err(Error::param("m_max", "must be at least 1"));
    }
    let red = Reduced::new(params)?;
    let t_max = t_max.unwrap_or(40.0 / params.kappa1.min(params.kappa2));
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::param("t_max", "must be positive"));
    }
    let mut out = QuadratureResult {
        g2_1: None,
        g2_2: None,
        s1: None,
        s2: None,
        relative_photons: (0.0, 0.0),
        nodes: 0,
    };
    if red.emax == 0.0 {
        return Ok(out);
    }
    let n_two = 2 * m_max + 1;
    let mut panels = (t_max / 4.0).ceil().max(1.0) as usize;
    let mut prev = evaluate(&red, n_two, &composite_rule(t_max, panels));
    let mut accepted = None;
    for _ in 0..MAX_REFINEMENTS {
        panels *= 2;
        let next = evaluate(&red, n_two, &composite_rule(t_max, panels));
        let change = (0..2)
            .map(|j| {
                let dn = (next.photons[j] - prev.photons[j]).abs() / next.photons[j].abs().max(f64::MIN_POSITIVE);
                let dp = (next.pairs[j] - prev.pairs[j]).abs() / next.pairs[j].abs().max(f64::MIN_POSITIVE);
                if next.photons[j] > 0.0 { dn.max(dp) } else { 0.0 }
            })
            .fold(0.0, f64::max);
        prev = next;
        if change < tol {
            accepted = Some(prev);
            break;
        }
    }
    let raw = accepted.ok_or_else(|| {
        Error::Quadrature(format!("moments still changing after {MAX_REFINEMENTS} refinements"))
    })?;
    out.nodes = panels * GL_ORDER;
    out.relative_photons = (raw.photons[0], raw.photons[1]);
    let mut s = [None, None];
    let mut g2 = [None, None];
    for j in 0..2 {
        let n = raw.photons[j];
        if red.e[j] > 0.0 {
            let k = params.kappa(j + 1);
            s[j] = Some(k * k * n / (4.0 * red.e[j] * red.e[j]));
        }
        if n > 0.0 {
            g2[j] = Some(raw.pairs[j] / (n * n));
        }
    }
    [out.s1, out.s2] = s;
    [out.g2_1, out.g2_2] = g2;
    Ok(out)
}

impl QuadratureResult {
    pub fn g2(&self, cavity: usize) -> f64 {
        (if cavity == 1 { self.g2_1 } else { self.g2_2 }).unwrap_or(f64::NAN)
    }

    pub fn s(&self, cavity: usize) -> f64 {
        (if cavity == 1 { self.s1 } else { self.s2 }).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qle::engine::{analytic_point, AnalyticOptions};

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let p30: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((p30 - 2.0 / 31.0).abs() < 1e-14);
        let p31: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(31)).sum();
        assert!(p31.abs() < 1e-15);
    }

    #[test]
    fn two_by_two_exponential() {
        let m = [[C64::new(0.15, 0.2), C64::new(0.0, -0.05)], [C64::new(0.0, -0.05), C64::new(0.15, 0.15)]];
        let u = 3.0;
        let reference = expm_dense(&Mat::<C64>::from_fn(2, 2, |r, c| -m[r][c] * u));
        let e = expm2(m, u);
        for r in 0..2 {
            for c in 0..2 {
                assert!((e[r][c] - reference[(r, c)]).norm() < 1e-14);
            }
        }
        let deg = [[C64::new(0.2, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(0.2, 0.0)]];
        assert!((expm2(deg, 2.0)[0][0] - (-0.4f64).exp()).norm() < 1e-15);
    }

    #[test]
    fn linear_system_gives_unity() {
        let p = SystemParams { g: 0.0, j: 0.05, ..SystemParams::default() };
        let q = quadrature_oracle_g2(&p, 12, None, 1e-9).unwrap();
        assert!((q.g2_1.unwrap() - 1.0).abs() < 1e-6);
        assert!((q.g2_2.unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn agrees_with_series_at_reference_point() {
        let p = SystemParams { j: 0.05, delta1: 0.25, ..SystemParams::default() };
        let q = quadrature_oracle_g2(&p, 12, None, 1e-9).unwrap();
        let a = analytic_point(&p, &AnalyticOptions::default()).unwrap();
        for j in 1..=2 {
            let (x, y) = (q.g2(j), a.g2(j).unwrap());
            assert!((x - y).abs() < 1e-6 * y, "cavity {j}: {x} vs {y}");
            let (x, y) = (q.s(j), a.s(j).unwrap());
            assert!((x - y).abs() < 1e-6 * y, "cavity {j}: {x} vs {y}");
        }
    }
}
