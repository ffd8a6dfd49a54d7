use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{ModeOperators, QOperator};
use crate::params::{ModeLayout, SystemParams};

/// Largest supported superoperator dimension (Hilbert dimension squared).
pub const MAX_SUPEROPERATOR_DIM: usize = 1 << 22;

/// Lindblad generator acting on column-stacked density matrices:
/// `vec(ρ)[i + d·j] = ρ[i, j]`, so that `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
///
/// Besides the assembled sparse matrix the generator keeps its factors:
/// the effective Hamiltonian `H − (i/2)Σ r c†c` and the weighted jump
/// operators, which the steady-state solvers use to build preconditioners.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub layout: ModeLayout,
    pub matrix: QOperator,
    pub effective_hamiltonian: QOperator,
    /// `(rate, c)` for every dissipator with a nonzero rate.
    pub jumps: Vec<(f64, QOperator)>,
    /// `max(E₁, E₂)/min(κ₁, κ₂)`, the expected ratio between consecutive
    /// photon-number sectors of the steady state.
    pub drive_ratio: f64,
}

impl Liouvillian {
    /// Hilbert-space dimension `d`; the superoperator is `d² × d²`.
    pub fn hilbert_dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, rho: &[C64]) -> Vec<C64> {
        self.matrix.apply(rho)
    }
}

/// Stacks the columns of a `d × d` operator.
pub fn vectorize(op: &QOperator) -> Vec<C64> {
    let d = op.dim();
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    for (r, c, x) in op.triplets() {
        v[r + d * c] = x;
    }
    v
}

/// Inverse of [`vectorize`], returning the dense matrix in row-major order.
pub fn unvectorize(v: &[C64], d: usize) -> Vec<Vec<C64>> {
    assert_eq!(v.len(), d * d);
    (0..d).map(|i| (0..d).map(|j| v[i + d * j]).collect()).collect()
}

/// `κ₁D[a₁] + κ₂D[a₂] + γ(n̄+1)D[b] + γn̄D[b†]` plus `−i[H, ·]`, with
/// `D[c]ρ = cρc† − ½{c†c, ρ}`.
pub fn build_liouvillian(
    h: &QOperator,
    params: &SystemParams,
    ops: &ModeOperators,
) -> Result<Liouvillian> {
    params.validate()?;
    let d = ops.layout.dim();
    if h.dim() != d {
        return Err(Error::InvalidLayout(format!(
            "Hamiltonian dimension {} does not match the layout dimension {d}",
            h.dim()
        )));
    }
    if d * d > MAX_SUPEROPERATOR_DIM {
        return Err(Error::DimensionLimit { dim: d * d, limit: MAX_SUPEROPERATOR_DIM });
    }
    let collapse = [
        (params.kappa1, ops.a1.clone()),
        (params.kappa2, ops.a2.clone()),
        (params.gamma * (params.nbar + 1.0), ops.b.clone()),
        (params.gamma * params.nbar, ops.b.adjoint()),
    ];
    let jumps: Vec<(f64, QOperator)> = collapse.into_iter().filter(|(r, _)| *r != 0.0).collect();
    let mut h_eff = h.clone();
    for (rate, c) in &jumps {
        h_eff = &h_eff - &c.adjoint().matmul(c).scale(C64::new(0.0, 0.5 * rate));
    }

    // −i(I ⊗ H_eff) + i(conj(H_eff) ⊗ I) + Σ r (conj(c) ⊗ c)
    let i = C64::new(0.0, 1.0);
    let mut t = Vec::with_capacity(2 * h_eff.nnz() * d + jumps.iter().map(|(_, c)| c.nnz().pow(2)).sum::<usize>());
    for (r, c, v) in h_eff.triplets() {
        for k in 0..d {
            t.push((r + d * k, c + d * k, -i * v));
            t.push((k + d * r, k + d * c, i * v.conj()));
        }
    }
    for (rate, c) in &jumps {
        for (j, l, u) in c.triplets() {
            for (a, b, w) in c.triplets() {
                t.push((a + d * j, b + d * l, *rate * u.conj() * w));
            }
        }
    }
    Ok(Liouvillian {
        layout: ops.layout,
        matrix: QOperator::from_triplets(d * d, t),
        effective_hamiltonian: h_eff,
        jumps,
        drive_ratio: params.e1.max(params.e2) / params.kappa1.min(params.kappa2),
    })
}

/// Superoperator of `D[c]`.
pub fn dissipator(c: &QOperator) -> QOperator {
    let d = c.dim();
    let id = QOperator::identity(d);
    let cdc = c.adjoint().matmul(c);
    let jump = c.conj().kron(c);
    let anti = &id.kron(&cdc) + &cdc.transpose().kron(&id);
    &jump - &anti.scale_re(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_hamiltonian, build_mode_operators};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn vectorization_is_column_major() {
        let a = QOperator::from_triplets(3, [(0, 1, c(2.0)), (2, 0, C64::new(0.0, 1.0))]);
        let b = QOperator::from_triplets(3, [(1, 1, c(3.0)), (0, 2, c(-1.0))]);
        let x = QOperator::from_triplets(3, [(1, 0, c(1.0)), (1, 2, c(0.5)), (2, 2, C64::new(1.0, 1.0))]);
        let v = vectorize(&x);
        assert_eq!(v[1], c(1.0));
        assert_eq!(v[1 + 3 * 2], c(0.5));
        let lhs = vectorize(&a.matmul(&x).matmul(&b));
        let rhs = b.transpose().kron(&a).apply(&v);
        for (p, q) in lhs.iter().zip(&rhs) {
            assert!((p - q).norm() < 1e-15);
        }
        let back = unvectorize(&v, 3);
        assert_eq!(back[1][2], c(0.5));
    }

    #[test]
    fn assembly_matches_kronecker_form() {
        let p = SystemParams { j: 0.05, nbar: 0.5, ..SystemParams::default() };
        let l = ModeLayout::new(2, 3, 3);
        let ops = build_mode_operators(&l).unwrap();
        let h = build_hamiltonian(&p, &l).unwrap();
        let lv = build_liouvillian(&h, &p, &ops).unwrap();
        let id = QOperator::identity(l.dim());
        let mut reference = C64::new(0.0, -1.0) * &(&id.kron(&h) - &h.transpose().kron(&id));
        for (rate, c) in [
            (p.kappa1, ops.a1.clone()),
            (p.kappa2, ops.a2.clone()),
            (p.gamma * (p.nbar + 1.0), ops.b.clone()),
            (p.gamma * p.nbar, ops.b.adjoint()),
        ] {
            reference = &reference + &(rate * &dissipator(&c));
        }
        assert!(lv.matrix.max_abs_diff(&reference) < 1e-14);
    }

    #[test]
    fn single_mode_decay() {
        let p = SystemParams {
            delta1: 0.0,
            delta2: 0.0,
            g: 0.0,
            j: 0.0,
            e1: 0.0,
            e2: 0.0,
            kappa1: 0.7,
            kappa2: 1e-300,
            gamma: 0.0,
            nbar: 0.0,
            omega_m: 1.0,
        };
        let l = ModeLayout::new(2, 2, 2);
        let ops = build_mode_operators(&l).unwrap();
        let h = QOperator::zeros(l.dim());
        let lv = build_liouvillian(&h, &p, &ops).unwrap();
        let one = l.index(1, 0, 0);
        let vac = l.index(0, 0, 0);
        let rho = QOperator::from_triplets(l.dim(), [(one, one, c(1.0))]);
        let out = lv.apply(&vectorize(&rho));
        let d = l.dim();
        for (k, x) in out.iter().enumerate() {
            let expect = if k == vac + d * vac {
                0.7
            } else if k == one + d * one {
                -0.7
            } else {
                0.0
            };
            assert!((x - c(expect)).norm() < 1e-15, "{k}: {x}");
        }
    }

    #[test]
    fn trace_preserving_at_reference_point() {
        let p = SystemParams { j: 0.05, nbar: 1.0, ..SystemParams::default() };
        let l = ModeLayout::new(3, 3, 6);
        let ops = build_mode_operators(&l).unwrap();
        let h = build_hamiltonian(&p, &l).unwrap();
        let lv = build_liouvillian(&h, &p, &ops).unwrap();
        let d = l.dim();
        let mut col_trace = vec![C64::new(0.0, 0.0); d * d];
        for (r, col, v) in lv.matrix.triplets() {
            if r % d == r / d {
                col_trace[col] += v;
            }
        }
        assert!(col_trace.iter().all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn vacuum_is_dark_without_drive() {
        let p = SystemParams { g: 0.0, j: 0.0, e1: 0.0, e2: 0.0, gamma: 0.0, delta1: 0.4, ..SystemParams::default() };
        let l = ModeLayout::new(3, 3, 4);
        let ops = build_mode_operators(&l).unwrap();
        let h = build_hamiltonian(&p, &l).unwrap();
        let lv = build_liouvillian(&h, &p, &ops).unwrap();
        let vac = QOperator::from_triplets(l.dim(), [(0, 0, c(1.0))]);
        let out = lv.apply(&vectorize(&vac));
        assert!(out.iter().all(|x| x.norm() == 0.0));
    }
}
