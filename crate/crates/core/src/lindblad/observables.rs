use serde::{Deserialize, Serialize};

use super::steady::DensityState;
use crate::fock::ModeOperators;
use crate::params::SystemParams;

/// Populations below this leave `g²` undefined.
pub const MIN_POPULATION: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceResult {
    /// `κ₁²⟨a₁†a₁⟩/(4E₁²)`, absent when `E₁ = 0`.
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    /// `⟨a₁†²a₁²⟩/⟨a₁†a₁⟩²`, absent when the cavity is empty.
    pub g2_1: Option<f64>,
    pub g2_2: Option<f64>,
    pub mean_photons: (f64, f64),
    pub mean_phonons: f64,
}

impl CoherenceResult {
    pub fn s(&self, cavity: usize) -> Option<f64> {
        if cavity == 1 { self.s1 } else { self.s2 }
    }

    pub fn g2(&self, cavity: usize) -> Option<f64> {
        if cavity == 1 { self.g2_1 } else { self.g2_2 }
    }
}

/// Normally ordered moments of the steady state.
pub fn observables(state: &DensityState, params: &SystemParams, ops: &ModeOperators) -> CoherenceResult {
    let mut s = [None, None];
    let mut g2 = [None, None];
    let mut n = [0.0; 2];
    for j in 1..=2 {
        let a = ops.cavity(j);
        let ad = a.adjoint();
        let num = ad.matmul(a);
        let pairs = ad.matmul(&num).matmul(a);
        let nj = state.expect(&num).re;
        let pj = state.expect(&pairs).re;
        n[j - 1] = nj;
        let e = params.pump(j);
        if e > 0.0 {
            let k = params.kappa(j);
            s[j - 1] = Some(k * k * nj / (4.0 * e * e));
        }
        if nj >= MIN_POPULATION {
            g2[j - 1] = Some(pj / (nj * nj));
        }
    }
    let phonons = state.expect(&ops.b.adjoint().matmul(&ops.b)).re;
    CoherenceResult {
        s1: s[0],
        s2: s[1],
        g2_1: g2[0],
        g2_2: g2[1],
        mean_photons: (n[0], n[1]),
        mean_phonons: phonons,
    }
}
