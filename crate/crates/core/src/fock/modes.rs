use num_complex::Complex64 as C64;

use super::operator::QOperator;
use crate::error::Result;
use crate::params::ModeLayout;

/// Annihilation operators of the three modes on the full tensor space.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    pub layout: ModeLayout,
    pub a1: QOperator,
    pub a2: QOperator,
    pub b: QOperator,
}

impl ModeOperators {
    pub fn cavity(&self, j: usize) -> &QOperator {
        match j {
            1 => &self.a1,
            2 => &self.a2,
            _ => panic!("cavity index must be 1 or 2, got {j}"),
        }
    }

    pub fn identity(&self) -> QOperator {
        QOperator::identity(self.layout.dim())
    }

    /// `a₁†a₁ + a₂†a₂`.
    pub fn total_photon_number(&self) -> QOperator {
        let n: Vec<C64> = (0..self.layout.dim())
            .map(|i| C64::new(self.layout.total_photons(i) as f64, 0.0))
            .collect();
        QOperator::diagonal(&n)
    }
}

/// Builds `a₁`, `a₂` and `b` on `cavity-1 ⊗ cavity-2 ⊗ mechanics`.
pub fn build_mode_operators(layout: &ModeLayout) -> Result<ModeOperators> {
    layout.validate()?;
    let (i1, i2, im) = (
        QOperator::identity(layout.n_cav1),
        QOperator::identity(layout.n_cav2),
        QOperator::identity(layout.n_mech),
    );
    let a1 = QOperator::kron_all(&[&QOperator::annihilation(layout.n_cav1), &i2, &im]);
    let a2 = QOperator::kron_all(&[&i1, &QOperator::annihilation(layout.n_cav2), &im]);
    let b = QOperator::kron_all(&[&i1, &i2, &QOperator::annihilation(layout.n_mech)]);
    let ops = ModeOperators { layout: *layout, a1, a2, b };
    assert_tensor_ordering(&ops);
    Ok(ops)
}

fn assert_tensor_ordering(ops: &ModeOperators) {
    let l = &ops.layout;
    let one = C64::new(1.0, 0.0);
    assert_eq!(ops.a1.get(l.index(0, 0, 0), l.index(1, 0, 0)), one, "cavity-1 factor misplaced");
    assert_eq!(ops.a2.get(l.index(0, 0, 0), l.index(0, 1, 0)), one, "cavity-2 factor misplaced");
    assert_eq!(ops.b.get(l.index(0, 0, 0), l.index(0, 0, 1)), one, "mechanical factor misplaced");
}
