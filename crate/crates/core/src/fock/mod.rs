//! Truncated Fock-space operators for two cavities and one mechanical mode.

pub mod hamiltonian;
pub mod levels;
pub mod modes;
pub mod operator;
pub mod polaron;

pub use hamiltonian::{build_hamiltonian, cavity_swap_permutation};
pub use levels::{eigen_levels, EigenLevel};
pub use modes::{build_mode_operators, ModeOperators};
pub use operator::QOperator;
pub use polaron::{polaron_transform, PolaronTransform};
