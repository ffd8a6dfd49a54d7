//! Lindblad generator, steady states and cavity observables.

pub mod gmres;
pub mod liouvillian;
pub mod observables;
pub mod sectors;
pub mod steady;

pub use liouvillian::{build_liouvillian, vectorize, unvectorize, Liouvillian};
pub use observables::{observables, CoherenceResult};
pub use steady::{
    steady_state_direct, steady_state_inverse_power, DensityState, InversePowerOptions, SolverMethod,
};

use crate::error::Result;
use crate::fock::{build_mode_operators, hamiltonian::hamiltonian_from_ops};
use crate::params::{ModeLayout, SystemParams};

/// Builds the generator for `params` and returns the direct steady state
/// together with its observables.
pub fn solve_point(params: &SystemParams, layout: &ModeLayout) -> Result<(DensityState, CoherenceResult)> {
    params.validate()?;
    let ops = build_mode_operators(layout)?;
    let h = hamiltonian_from_ops(params, &ops);
    let l = build_liouvillian(&h, params, &ops)?;
    let state = steady_state_direct(&l)?;
    let obs = observables(&state, params, &ops);
    Ok((state, obs))
}
