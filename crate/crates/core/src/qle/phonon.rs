//! Vacuum correlators of the free-mechanics polaron displacement.
//!
//! With `P(t) = iλ(b† e^{iωt} − b e^{−iωt})` each factor `e^{iwP(t)}` is the
//! displacement `D(−wλe^{iωt})`, and for the vacuum
//! `⟨Π_k e^{iw_k P(t_k)}⟩ = exp[−λ²/2 Σ w_k² − λ² Σ_{i<j} w_i w_j e^{−iω(t_i − t_j)}]`,
//! the product taken left to right.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::series::ExpSeries;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhononCorrelationSpec {
    /// `g/ω_m`.
    pub lambda: f64,
    /// Highest phonon number kept in the exponential series.
    pub m_max: usize,
    #[serde(default = "one")]
    pub omega_m: f64,
}

fn one() -> f64 {
    1.0
}

impl PhononCorrelationSpec {
    pub fn new(lambda: f64, m_max: usize) -> Result<Self> {
        let s = PhononCorrelationSpec { lambda, m_max, omega_m: 1.0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() {
            return Err(Error::param("lambda", "must be finite"));
        }
        if self.m_max < 1 {
            return Err(Error::param("m_max", "must be at least 1"));
        }
        if !(self.omega_m > 0.0 && self.omega_m.is_finite()) {
            return Err(Error::param("omega_m", "must be positive"));
        }
        Ok(())
    }

    /// `λ^{2(m+1)}/(m+1)!` for `m = m_max`, the size of the first dropped term.
    pub fn tail_bound(&self) -> f64 {
        tail_bound(self.lambda, self.m_max)
    }
}

pub fn tail_bound(lambda: f64, m_max: usize) -> f64 {
    let l2 = lambda * lambda;
    (1..=m_max + 1).fold(1.0, |acc, k| acc * l2 / k as f64)
}

/// `Φ₂(τ) = ⟨e^{iP(τ)} e^{−iP(0)}⟩ = exp[λ²(e^{−iωτ} − 1)]`.
pub fn phonon_corr_2pt(spec: &PhononCorrelationSpec, tau: f64) -> C64 {
    let l2 = spec.lambda * spec.lambda;
    (l2 * (C64::new(0.0, -spec.omega_m * tau).exp() - 1.0)).exp()
}

/// `⟨Π_k e^{i w_k P(t_k)}⟩` for arbitrary real weights.
pub fn phonon_corr(spec: &PhononCorrelationSpec, times: &[f64], weights: &[f64]) -> C64 {
    assert_eq!(times.len(), weights.len());
    let l2 = spec.lambda * spec.lambda;
    let mut expo = C64::new(-0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>(), 0.0);
    for i in 0..times.len() {
        for j in i + 1..times.len() {
            let phase = C64::new(0.0, -spec.omega_m * (times[i] - times[j])).exp();
            expo -= l2 * weights[i] * weights[j] * phase;
        }
    }
    expo.exp()
}

/// Four displacement factors `e^{±iP(t_k)}`, in the given order.
pub fn phonon_corr_4pt(spec: &PhononCorrelationSpec, times: [f64; 4], signs: [i8; 4]) -> C64 {
    let w = signs.map(|s| s.signum() as f64);
    phonon_corr(spec, &times, &w)
}

/// `Φ₂(τ) ≈ e^{−λ²} Σ_{m ≤ m_max} λ^{2m}/m! e^{−imωτ}`.
pub fn expand_to_series(spec: &PhononCorrelationSpec) -> ExpSeries {
    let l2 = spec.lambda * spec.lambda;
    let mut c = (-l2).exp();
    let mut out = ExpSeries::default();
    for m in 0..=spec.m_max {
        if m > 0 {
            c *= l2 / m as f64;
        }
        out.push(C64::new(c, 0.0), C64::new(0.0, -(m as f64) * spec.omega_m));
    }
    out
}

/// `⟨a|D(λ)|b⟩` for real `λ`, `a, b < n`, row-major.
pub fn displacement_matrix(lambda: f64, n: usize) -> Vec<Vec<f64>> {
    let x = lambda * lambda;
    let ln_fact: Vec<f64> = (0..n).scan(0.0, |acc, k| {
        if k > 0 {
            *acc += (k as f64).ln();
        }
        Some(*acc)
    })
    .collect();
    let mut d = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (lo, hi) = (a.min(b), a.max(b));
            let k = hi - lo;
            let lag = laguerre(lo, k as f64, x);
            let sign = if b > a && k % 2 == 1 { -1.0 } else { 1.0 };
            let mag = if lambda == 0.0 {
                if k == 0 { 1.0 } else { 0.0 }
            } else {
                (0.5 * (ln_fact[lo] - ln_fact[hi]) + k as f64 * lambda.abs().ln() - 0.5 * x).exp()
            };
            let lsign = if lambda < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            d[a][b] = sign * lsign * mag * lag;
        }
    }
    d
}

/// Generalized Laguerre polynomial `L_n^{(α)}(x)` by upward recurrence.
fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
