//! Weak-drive steady state of the Langevin equations in the polaron frame.
//!
//! One-photon amplitudes are resolved by the phonon number `m` of the
//! displaced mechanical state, `a(m) = F_m (M + imω)⁻¹ E` with
//! `F_m = ⟨m|D(λ)|0⟩`. The two-photon amplitudes `⟨a₁²⟩, ⟨a₂²⟩, ⟨a₁a₂⟩`
//! follow from the one-photon ones by a second displacement, one linear solve
//! per phonon number `n`, and carry the extra `−2Δ_g` Kerr shift.
//! In truncated mode every linear solve is replaced by the Neumann series in
//! the hopping `J`, built term by term with [`integrate_ordered`].

use std::fmt;

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::phonon::{displacement_matrix, tail_bound};
use super::series::{integrate_ordered, ExpSeries};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Relative population below which `g²` is reported as undefined.
pub const MIN_RELATIVE_POPULATION: f64 = 1e-24;

/// How many powers of `J` the amplitudes keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum JOrder {
    Truncated(u32),
    /// All orders, by direct solution of the coupled linear equations.
    #[default]
    Resummed,
}

impl fmt::Display for JOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JOrder::Truncated(k) => write!(f, "{k}"),
            JOrder::Resummed => write!(f, "resummed"),
        }
    }
}

impl std::str::FromStr for JOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "resummed" | "all" | "inf" => Ok(JOrder::Resummed),
            other => other
                .parse::<u32>()
                .map(JOrder::Truncated)
                .map_err(|_| Error::param("j_order", format!("expected an integer or `resummed`, got `{other}`"))),
        }
    }
}

impl Serialize for JOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            JOrder::Truncated(k) => s.serialize_u32(*k),
            JOrder::Resummed => s.serialize_str("resummed"),
        }
    }
}

impl<'de> Deserialize<'de> for JOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(k) => Ok(JOrder::Truncated(k)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticOptions {
    #[serde(default)]
    pub j_order: JOrder,
    #[serde(default = "default_m_max")]
    pub m_max: usize,
}

fn default_m_max() -> usize {
    12
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        AnalyticOptions { j_order: JOrder::Resummed, m_max: default_m_max() }
    }
}

impl AnalyticOptions {
    pub fn truncated(k: u32) -> Self {
        AnalyticOptions { j_order: JOrder::Truncated(k), ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticResult {
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub g2_1: Option<f64>,
    pub g2_2: Option<f64>,
    /// `⟨a_j†a_j⟩` divided by `max(E₁, E₂)²`.
    pub relative_photons: (f64, f64),
    pub j_order: JOrder,
    pub m_max: usize,
    /// First dropped term of the phonon series.
    pub tail_estimate: f64,
    /// A phonon sideband lies within a linewidth of a cavity or two-photon
    /// resonance.
    pub sideband: bool,
}

impl AnalyticResult {
    pub fn s(&self, cavity: usize) -> Option<f64> {
        if cavity == 1 { self.s1 } else { self.s2 }
    }

    pub fn g2(&self, cavity: usize) -> Option<f64> {
        if cavity == 1 { self.g2_1 } else { self.g2_2 }
    }
}

/// Problem data shared by the series engine and the quadrature oracle.
#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    pub e: [f64; 2],
    pub emax: f64,
    pub p: [C64; 2],
    pub j: f64,
    pub gamma: [C64; 3],
    pub lambda: f64,
    pub omega: f64,
}

impl Reduced {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        if params.nbar != 0.0 {
            return Err(Error::Unsupported(
                "the analytic engine assumes a zero-temperature mechanical bath".into(),
            ));
        }
        let emax = params.e1.max(params.e2);
        let e = if emax > 0.0 { [params.e1 / emax, params.e2 / emax] } else { [0.0, 0.0] };
        let dg = params.delta_g();
        let dt = [params.shifted_detuning(1), params.shifted_detuning(2)];
        let (k1, k2) = (params.kappa1, params.kappa2);
        Ok(Reduced {
            e,
            emax,
            p: [C64::new(k1 / 2.0, dt[0]), C64::new(k2 / 2.0, dt[1])],
            j: params.j,
            gamma: [
                C64::new(k1, 2.0 * dt[0] - 2.0 * dg),
                C64::new(k2, 2.0 * dt[1] - 2.0 * dg),
                C64::new(0.5 * (k1 + k2), dt[0] + dt[1] - 2.0 * dg),
            ],
            lambda: params.lambda(),
            omega: params.omega_m,
        })
    }

    /// `M + iν`.
    pub fn one_photon_matrix(&self, nu: f64) -> [[C64; 2]; 2] {
        let hop = C64::new(0.0, -self.j);
        let i = C64::new(0.0, nu);
        [[self.p[0] + i, hop], [hop, self.p[1] + i]]
    }

    /// `Γ + iν` for the channels `(a₁², a₂², a₁a₂)`.
    pub fn two_photon_matrix(&self, nu: f64) -> [[C64; 3]; 3] {
        let i = C64::new(0.0, nu);
        let h2 = C64::new(0.0, -2.0 * self.j);
        let h1 = C64::new(0.0, -self.j);
        let z = C64::new(0.0, 0.0);
        [[self.gamma[0] + i, z, h2], [z, self.gamma[1] + i, h2], [h1, h1, self.gamma[2] + i]]
    }

    /// Sources of the two-photon channels from one-photon amplitudes.
    pub fn source(&self, a: [C64; 2]) -> [C64; 3] {
        let [e1, e2] = self.e;
        [2.0 * e1 * a[0], 2.0 * e2 * a[1], e1 * a[1] + e2 * a[0]]
    }

    pub fn sideband(&self, m_max: usize) -> bool {
        let w = self.omega;
        (1..=m_max).any(|m| {
            let nu = m as f64 * w;
            (0..2).any(|j| self.e[j] > 0.0 && (self.p[j].im + nu).abs() < self.p[j].re)
                || (0..3).any(|c| (self.gamma[c].im + nu).abs() < self.gamma[c].re)
        })
    }
}

fn solve_dense<const N: usize>(a: [[C64; N]; N], b: [C64; N]) -> Result<[C64; N]> {
    let m = Mat::<C64>::from_fn(N, N, |r, c| a[r][c]);
    let rhs = Mat::<C64>::from_fn(N, 1, |r, _| b[r]);
    let x = m.partial_piv_lu().solve(&rhs);
    let mut out = [C64::new(0.0, 0.0); N];
    for (r, o) in out.iter_mut().enumerate() {
        *o = x[(r, 0)];
        if !o.re.is_finite() || !o.im.is_finite() {
            return Err(Error::ResonantDenominator { pole: a[0][0], rate: C64::new(0.0, 0.0), magnitude: 0.0 });
        }
    }
    Ok(out)
}

// Phonon-resolved amplitudes, one entry per phonon number, one series per
// cavity; the series rate `iνω` labels phonon number `ν`.
fn phonon_series(values: impl Iterator<Item = C64>, omega: f64) -> ExpSeries {
    let mut s = ExpSeries::default();
    for (k, v) in values.enumerate() {
        s.push(v, C64::new(0.0, k as f64 * omega));
    }
    s
}

struct Moments {
    photons: [f64; 2],
    pairs: [f64; 2],
}

fn moments(red: &Reduced, opts: &AnalyticOptions) -> Result<Moments> {
    let n_one = opts.m_max + 1;
    let n_two = 2 * opts.m_max + 1;
    let d = displacement_matrix(red.lambda, n_one.max(n_two));
    let w = red.omega;

    // one-photon amplitudes a[order][cavity][m]
    let orders: Vec<[Vec<C64>; 2]> = match opts.j_order {
        JOrder::Resummed => {
            let mut amp = [vec![C64::new(0.0, 0.0); n_one], vec![C64::new(0.0, 0.0); n_one]];
            for m in 0..n_one {
                let e = [C64::new(red.e[0], 0.0), C64::new(red.e[1], 0.0)];
                let x = solve_dense(red.one_photon_matrix(m as f64 * w), e)?;
                for j in 0..2 {
                    amp[j][m] = d[m][0] * x[j];
                }
            }
            vec![amp]
        }
        JOrder::Truncated(k) => {
            let hop = C64::new(0.0, red.j);
            let mut out: Vec<[ExpSeries; 2]> = Vec::with_capacity(k as usize + 1);
            let pumped = |j: usize| phonon_series((0..n_one).map(|m| C64::new(d[m][0] * red.e[j], 0.0)), w);
            out.push([integrate_ordered(&pumped(0), red.p[0])?, integrate_ordered(&pumped(1), red.p[1])?]);
            for o in 1..=k as usize {
                let prev = &out[o - 1];
                let next = [
                    integrate_ordered(&prev[1].scale(hop), red.p[0])?,
                    integrate_ordered(&prev[0].scale(hop), red.p[1])?,
                ];
                out.push(next);
            }
            out.into_iter().map(|[x, y]| [x.coeffs().collect(), y.coeffs().collect()]).collect()
        }
    };

    let mut photons = [0.0; 2];
    for j in 0..2 {
        for m in 0..n_one {
            let a: C64 = orders.iter().map(|o| o[j][m]).sum();
            photons[j] += a.norm_sqr();
        }
    }

    // two-photon sources per order, resolved in the doubly displaced basis
    let sources: Vec<[Vec<C64>; 3]> = orders
        .iter()
        .map(|o| {
            let mut s = [vec![C64::new(0.0, 0.0); n_two], vec![C64::new(0.0, 0.0); n_two], vec![C64::new(0.0, 0.0); n_two]];
            for n in 0..n_two {
                for m in 0..n_one {
                    let src = red.source([o[0][m], o[1][m]]);
                    for c in 0..3 {
                        s[c][n] += d[n][m] * src[c];
                    }
                }
            }
            s
        })
        .collect();

    let mut pairs = [0.0; 2];
    match opts.j_order {
        JOrder::Resummed => {
            let s = &sources[0];
            for n in 0..n_two {
                let x = solve_dense(red.two_photon_matrix(n as f64 * w), [s[0][n], s[1][n], s[2][n]])?;
                pairs[0] += x[0].norm_sqr();
                pairs[1] += x[1].norm_sqr();
            }
        }
        JOrder::Truncated(_) => {
            let (h2, h1) = (C64::new(0.0, 2.0 * red.j), C64::new(0.0, red.j));
            let mut total = [vec![C64::new(0.0, 0.0); n_two], vec![C64::new(0.0, 0.0); n_two]];
            let mut prev: Option<[ExpSeries; 3]> = None;
            for s in &sources {
                let mut x: Vec<ExpSeries> = Vec::with_capacity(3);
                for c in 0..3 {
                    let mut rhs = phonon_series(s[c].iter().copied(), w);
                    if let Some(p) = &prev {
                        let feed = match c {
                            0 | 1 => p[2].scale(h2),
                            _ => p[0].add(&p[1]).scale(h1),
                        };
                        rhs = rhs.add(&feed);
                    }
                    x.push(integrate_ordered(&rhs, red.gamma[c])?);
                }
                for j in 0..2 {
                    for (t, v) in total[j].iter_mut().zip(x[j].coeffs()) {
                        *t += v;
                    }
                }
                prev = Some([x[0].clone(), x[1].clone(), x[2].clone()]);
            }
            for j in 0..2 {
                pairs[j] = total[j].iter().map(|v| v.norm_sqr()).sum();
            }
        }
    }
    Ok(Moments { photons, pairs })
}

/// Normalized cavity transmissions `κ_j²⟨a_j†a_j⟩/(4E_j²)`.
pub fn analytic_spectrum(params: &SystemParams, opts: &AnalyticOptions) -> Result<(Option<f64>, Option<f64>)> {
    let r = analytic_point(params, opts)?;
    Ok((r.s1, r.s2))
}

/// `⟨a_j†²a_j²⟩/⟨a_j†a_j⟩²` for both cavities.
pub fn analytic_g2(params: &SystemParams, opts: &AnalyticOptions) -> Result<(Option<f64>, Option<f64>)> {
    let r = analytic_point(params, opts)?;
    Ok((r.g2_1, r.g2_2))
}

pub fn analytic_point(params: &SystemParams, opts: &AnalyticOptions) -> Result<AnalyticResult> {
    if opts.m_max < 1 {
        return Err(Error::param("m_max", "must be at least 1"));
    }
    let red = Reduced::new(params)?;
    let mut out = AnalyticResult {
        s1: None,
        s2: None,
        g2_1: None,
        g2_2: None,
        relative_photons: (0.0, 0.0),
        j_order: opts.j_order,
        m_max: opts.m_max,
        tail_estimate: tail_bound(red.lambda, opts.m_max),
        sideband: red.sideband(opts.m_max),
    };
    if red.emax == 0.0 {
        return Ok(out);
    }
    // Cavity 2 is evaluated as cavity 1 of the relabelled system, so the
    // swap symmetry holds bit for bit instead of up to rounding.
    let own = moments(&red, opts)?;
    let other = moments(&Reduced::new(&params.swapped())?, opts)?;
    let mom = Moments { photons: [own.photons[0], other.photons[0]], pairs: [own.pairs[0], other.pairs[0]] };
    out.relative_photons = (mom.photons[0], mom.photons[1]);
    let mut s = [None, None];
    let mut g2 = [None, None];
    let linear = red.lambda == 0.0 && (opts.j_order == JOrder::Resummed || red.j == 0.0);
    for j in 0..2 {
        let n = mom.photons[j];
        if red.e[j] > 0.0 {
            let k = params.kappa(j + 1);
            s[j] = Some(k * k * n / (4.0 * red.e[j] * red.e[j]));
        }
        if n >= MIN_RELATIVE_POPULATION {
            // Without the mechanics the fields are linear and coherent; the
            // ratio below would only add rounding. Truncated orders in J
            // keep their own O(J^{K+1}) error and are left as computed.
            g2[j] = Some(if linear { 1.0 } else { mom.pairs[j] / (n * n) });
        } else if red.e[j] > 0.0 || red.j != 0.0 {
            log::warn!("cavity {} population {n:e} underflows; g2 undefined", j + 1);
        }
    }
    [out.s1, out.s2] = s;
    [out.g2_1, out.g2_2] = g2;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> SystemParams {
        SystemParams { j: 0.05, ..SystemParams::default() }
    }

    #[test]
    fn empty_resonant_cavity() {
        let p = SystemParams { g: 0.0, j: 0.0, delta1: 0.0, ..SystemParams::default() };
        for o in [AnalyticOptions::default(), AnalyticOptions::truncated(0), AnalyticOptions::truncated(2)] {
            let r = analytic_point(&p, &o).unwrap();
            assert!((r.s1.unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_system_is_poissonian() {
        let p = SystemParams { g: 0.0, ..reference() };
        let r = analytic_point(&p, &AnalyticOptions::default()).unwrap();
        assert_eq!((r.g2_1, r.g2_2), (Some(1.0), Some(1.0)));
        let p = SystemParams { g: 0.0, j: 0.0, ..reference() };
        for k in 0..4 {
            let r = analytic_point(&p, &AnalyticOptions::truncated(k)).unwrap();
            assert!((r.g2_1.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zeroth_order_is_single_cavity() {
        let base = analytic_point(&reference(), &AnalyticOptions::truncated(0)).unwrap();
        let other = SystemParams { delta2: 0.9, e2: 0.004, kappa2: 0.2, ..reference() };
        let r = analytic_point(&other, &AnalyticOptions::truncated(0)).unwrap();
        assert!((base.s1.unwrap() - r.s1.unwrap()).abs() < 1e-14);
    }

    #[test]
    fn truncation_converges_to_resummed() {
        let p = reference();
        let full = analytic_point(&p, &AnalyticOptions::default()).unwrap();
        let mut last = f64::INFINITY;
        for k in [1, 3, 6, 12, 24] {
            let r = analytic_point(&p, &AnalyticOptions::truncated(k)).unwrap();
            let err = (r.g2_1.unwrap() - full.g2_1.unwrap()).abs();
            assert!(err < last, "order {k}: {err:e} after {last:e}");
            last = err;
        }
        assert!(last < 1e-9, "{last:e}");
    }

    #[test]
    fn j_order_parses() {
        assert_eq!("2".parse::<JOrder>().unwrap(), JOrder::Truncated(2));
        assert_eq!("resummed".parse::<JOrder>().unwrap(), JOrder::Resummed);
        assert!("two".parse::<JOrder>().is_err());
        let o: AnalyticOptions = serde_json::from_str(r#"{"j_order": 2}"#).unwrap();
        assert_eq!(o.j_order, JOrder::Truncated(2));
        assert_eq!(o.m_max, 12);
        let o: AnalyticOptions = serde_json::from_str(r#"{"j_order": "resummed", "m_max": 8}"#).unwrap();
        assert_eq!(serde_json::to_string(&o).unwrap(), r#"{"j_order":"resummed","m_max":8}"#);
    }

    #[test]
    fn thermal_bath_is_rejected() {
        let p = SystemParams { nbar: 1.0, ..reference() };
        assert!(matches!(analytic_point(&p, &AnalyticOptions::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn blockade_minimum_near_polaron_shift() {
        let p = SystemParams { j: 0.0, ..SystemParams::default() };
        let grid: Vec<f64> = (0..=100).map(|k| 0.005 * k as f64).collect();
        let best = grid
            .iter()
            .map(|&d| (analytic_point(&p.clone().with("delta1", d).unwrap(), &AnalyticOptions::default()).unwrap().g2_1.unwrap(), d))
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
        assert!(best.0 < 1.0);
        assert!((0.15..0.3).contains(&best.1), "{best:?}");
    }
}
