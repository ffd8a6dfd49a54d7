//! Perturbative weak-drive solution of the quantum Langevin equations.

pub mod engine;
pub mod phonon;
pub mod quadrature;
pub mod series;

pub use engine::{analytic_g2, analytic_point, analytic_spectrum, AnalyticOptions, AnalyticResult, JOrder};
pub use phonon::{
    displacement_matrix, expand_to_series, phonon_corr, phonon_corr_2pt, phonon_corr_4pt, PhononCorrelationSpec,
};
pub use quadrature::{quadrature_oracle_g2, QuadratureResult};
pub use series::{integrate_ordered, ExpSeries};
