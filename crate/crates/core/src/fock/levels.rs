use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Closed-system level of the undriven Hamiltonian in the mechanical
/// ground state of the polaron frame.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenLevel {
    /// Total photon number `n₁ + n₂`.
    pub n_total: usize,
    /// Branch label `ε`; see [`eigen_levels`].
    pub branch: i32,
    pub energy: f64,
    /// Normalized amplitudes on `|n₁, n₂⟩`, listed as `(n₁, n₂, amplitude)`.
    pub state: Vec<(usize, usize, f64)>,
}

/// Tunneling-split levels with one or two photons for equal detunings
/// `Δ₁ = Δ₂ = Δ`.
///
/// * `n_total = 1`: `E = Δ − Δ_g + εJ`, `ε = ±1`, with state
///   `(|1,0⟩ − ε|0,1⟩)/√2`. With the hopping term `−J(a₁†a₂ + a₁a₂†)` the
///   symmetric combination is the lower level.
/// * `n_total = 2`: `E = 2Δ − 4Δ_g − 2εJ`, `ε ∈ {−1, 0, 1}`, with states
///   `(|2,0⟩ + √2ε|1,1⟩ + |0,2⟩)/2` for `ε = ±1` and
///   `(|2,0⟩ − |0,2⟩)/√2` for `ε = 0`.
///
/// The shift `4Δ_g` is the Kerr energy `Δ_g N²` at `N = 2`.
/// Levels are returned in ascending energy.
pub fn eigen_levels(params: &SystemParams, n_total: usize) -> Result<Vec<EigenLevel>> {
    params.validate()?;
    if params.delta1 != params.delta2 {
        return Err(Error::param(
            "delta2",
            format!("level diagnostics need Δ₁ = Δ₂, got {} and {}", params.delta1, params.delta2),
        ));
    }
    let (d, dg, j) = (params.delta1, params.delta_g(), params.j);
    let mut levels = match n_total {
        1 => [1, -1]
            .into_iter()
            .map(|eps| EigenLevel {
                n_total,
                branch: eps,
                energy: d - dg + eps as f64 * j,
                state: vec![(1, 0, FRAC_1_SQRT_2), (0, 1, -eps as f64 * FRAC_1_SQRT_2)],
            })
            .collect::<Vec<_>>(),
        2 => [-1, 0, 1]
            .into_iter()
            .map(|eps| {
                let state = if eps == 0 {
                    vec![(2, 0, FRAC_1_SQRT_2), (1, 1, 0.0), (0, 2, -FRAC_1_SQRT_2)]
                } else {
                    vec![(2, 0, 0.5), (1, 1, eps as f64 * FRAC_1_SQRT_2), (0, 2, 0.5)]
                };
                EigenLevel {
                    n_total,
                    branch: eps,
                    energy: 2.0 * d - 4.0 * dg - 2.0 * eps as f64 * j,
                    state,
                }
            })
            .collect(),
        _ => {
            return Err(Error::Unsupported(format!(
                "level diagnostics cover one and two photons, got n_total = {n_total}"
            )))
        }
    };
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(levels)
}
