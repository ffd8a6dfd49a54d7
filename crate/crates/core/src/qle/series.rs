//! Finite sums of complex exponentials and the ordered-integration rule.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Two rates closer than this are treated as the same exponential.
pub const RATE_MERGE_TOL: f64 = 1e-14;
/// `|pole + rate|` below this is a resonance.
pub const RESONANCE_TOL: f64 = 1e-12;

/// `f(t) = Σ_k c_k e^{r_k t}`, kept as `(c_k, r_k)` with distinct rates in
/// order of first appearance.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpSeries {
    terms: Vec<(C64, C64)>,
}

impl ExpSeries {
    /// Builds a series, summing the coefficients of repeated rates.
    pub fn new(terms: impl IntoIterator<Item = (C64, C64)>) -> Self {
        let mut s = ExpSeries::default();
        for (c, r) in terms {
            s.push(c, r);
        }
        s
    }

    pub fn constant(c: C64) -> Self {
        ExpSeries { terms: vec![(c, C64::new(0.0, 0.0))] }
    }

    pub fn push(&mut self, coeff: C64, rate: C64) {
        match self.terms.iter_mut().find(|(_, r)| (*r - rate).norm() <= RATE_MERGE_TOL) {
            Some(t) => t.0 += coeff,
            None => self.terms.push((coeff, rate)),
        }
    }

    pub fn terms(&self) -> &[(C64, C64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = C64> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.terms.iter().map(|(c, r)| c * (r * t).exp()).sum()
    }

    pub fn coeff_sum(&self) -> C64 {
        self.coeffs().sum()
    }

    /// True when no term grows as `t → ∞`.
    pub fn is_bounded(&self) -> bool {
        self.terms.iter().all(|(_, r)| r.re <= 0.0)
    }

    pub fn scale(&self, k: C64) -> Self {
        ExpSeries { terms: self.terms.iter().map(|&(c, r)| (c * k, r)).collect() }
    }

    pub fn add(&self, other: &ExpSeries) -> Self {
        let mut s = self.clone();
        for &(c, r) in &other.terms {
            s.push(c, r);
        }
        s
    }

    /// Pointwise product; rates add.
    pub fn mul(&self, other: &ExpSeries) -> Self {
        let mut s = ExpSeries::default();
        for &(c, r) in &self.terms {
            for &(d, q) in &other.terms {
                s.push(c * d, r + q);
            }
        }
        s
    }
}

/// `∫_{−∞}^t e^{−p(t−τ)} f(τ) dτ`, term by term `c e^{rt} → c/(p + r) e^{rt}`.
///
/// The integral converges when `Re(p + r) > 0` for every term; otherwise the
/// result is the analytic continuation of the same formula.
pub fn integrate_ordered(f: &ExpSeries, pole: C64) -> Result<ExpSeries> {
    if !(pole.re > 0.0) || !pole.im.is_finite() {
        return Err(Error::param("pole", format!("needs a positive real part, got {pole}")));
    }
    let mut terms = Vec::with_capacity(f.len());
    for &(c, r) in &f.terms {
        let den = pole + r;
        if den.norm() < RESONANCE_TOL {
            return Err(Error::ResonantDenominator { pole, rate: r, magnitude: den.norm() });
        }
        terms.push((c / den, r));
    }
    Ok(ExpSeries { terms })
}
