//! Steady-state photon statistics of two tunnel-coupled optical cavities
//! sharing one mechanical resonator.

pub mod error;
pub mod fock;
pub mod lindblad;
pub mod params;
pub mod qle;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{ModeLayout, SystemParams};
