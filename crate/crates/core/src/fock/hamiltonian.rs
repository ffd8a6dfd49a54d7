use num_complex::Complex64 as C64;

use super::modes::{build_mode_operators, ModeOperators};
use super::operator::QOperator;
use crate::error::Result;
use crate::params::{ModeLayout, SystemParams};

/// Rotating-frame Hamiltonian
///
/// ```text
/// H = Σ_j [Δ_j a_j†a_j + iE_j(a_j† − a_j) + g a_j†a_j (b + b†)]
///     − J(a₁†a₂ + a₁a₂†) + ω_m b†b
/// ```
pub fn build_hamiltonian(params: &SystemParams, layout: &ModeLayout) -> Result<QOperator> {
    params.validate()?;
    let ops = build_mode_operators(layout)?;
    Ok(hamiltonian_from_ops(params, &ops))
}

pub fn hamiltonian_from_ops(params: &SystemParams, ops: &ModeOperators) -> QOperator {
    let i = C64::new(0.0, 1.0);
    let x = &ops.b + &ops.b.adjoint();
    let mut h = params.omega_m * &ops.b.adjoint().matmul(&ops.b);
    for j in 1..=2 {
        let a = ops.cavity(j);
        let ad = a.adjoint();
        let n = ad.matmul(a);
        h = &h + &(params.detuning(j) * &n);
        h = &h + &((i * params.pump(j)) * &(&ad - a));
        h = &h + &(params.g * &n.matmul(&x));
    }
    let hop = &ops.a1.adjoint().matmul(&ops.a2) + &ops.a1.matmul(&ops.a2.adjoint());
    &h - &(params.j * &hop)
}

/// Basis permutation exchanging the two cavity factors; only defined when
/// both cavities share the same cutoff.
pub fn cavity_swap_permutation(layout: &ModeLayout) -> Vec<usize> {
    assert_eq!(layout.n_cav1, layout.n_cav2, "cavity swap needs equal cutoffs");
    (0..layout.dim())
        .map(|k| {
            let (n1, n2, m) = layout.occupation(k);
            layout.index(n2, n1, m)
        })
        .collect()
}
