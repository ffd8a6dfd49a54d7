use faer::Mat;
use num_complex::Complex64 as C64;

use super::modes::build_mode_operators;
use super::operator::QOperator;
use crate::error::{Error, Result};
use crate::params::{ModeLayout, SystemParams};

/// Largest dimension for which the dense exponential is attempted.
pub const DENSE_EXPM_LIMIT: usize = 5000;

/// Tolerance on the truncation diagnostics reported by [`polaron_transform`].
pub const POLARON_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct PolaronTransform {
    pub u: QOperator,
    /// `max |U†U − I|` over all basis states.
    pub unitarity_defect: f64,
    /// Largest deviation of `U|n₁,n₂,0⟩` from the exact coherent state
    /// `|n₁,n₂⟩ ⊗ |λ(n₁+n₂)⟩`, over photon sectors whose coherent state
    /// fits the phonon cutoff.
    pub displacement_error: f64,
}

/// `U = exp[λ(a₁†a₁ + a₂†a₂)(b† − b)]`, computed from the dense exponent.
///
/// The truncated exponent is anti-Hermitian, so `U` is unitary to rounding
/// on the whole space; the truncation shows up instead as a deviation of the
/// displaced vacuum from the exact coherent state, which is reported in
/// `displacement_error` and logged when it exceeds [`POLARON_TOL`].
pub fn polaron_transform(params: &SystemParams, layout: &ModeLayout) -> Result<PolaronTransform> {
    params.validate()?;
    let ops = build_mode_operators(layout)?;
    let dim = layout.dim();
    if dim >= DENSE_EXPM_LIMIT {
        return Err(Error::DimensionLimit { dim, limit: DENSE_EXPM_LIMIT });
    }
    let lambda = params.lambda();
    let gen = ops
        .total_photon_number()
        .matmul(&(&ops.b.adjoint() - &ops.b))
        .scale_re(lambda);
    let u_dense = expm_dense(&gen.to_dense());
    let u = dense_to_sparse(&u_dense, 1e-300);

    let udu = u.adjoint().matmul(&u);
    let unitarity_defect = udu.max_abs_diff(&QOperator::identity(dim));

    let mut displacement_error: f64 = 0.0;
    for n in 0..=layout.max_photons() {
        let alpha = lambda * n as f64;
        if coherent_tail(alpha, layout.n_mech) > 1e-18 {
            continue;
        }
        for n1 in 0..layout.n_cav1 {
            if n < n1 || n - n1 >= layout.n_cav2 {
                continue;
            }
            let col = layout.index(n1, n - n1, 0);
            for m in 0..layout.n_mech {
                let exact = coherent_amplitude(alpha, m);
                let got = u.get(layout.index(n1, n - n1, m), col);
                displacement_error = displacement_error.max((got - exact).norm());
            }
        }
    }
    if unitarity_defect > POLARON_TOL || displacement_error > POLARON_TOL {
        log::warn!(
            "polaron transform truncation: unitarity defect {unitarity_defect:e}, \
             displacement error {displacement_error:e} (n_mech = {})",
            layout.n_mech
        );
    }
    Ok(PolaronTransform { u, unitarity_defect, displacement_error })
}

/// `⟨m|α⟩` for real `α`.
pub fn coherent_amplitude(alpha: f64, m: usize) -> f64 {
    let mut v = (-0.5 * alpha * alpha).exp();
    for k in 1..=m {
        v *= alpha / (k as f64).sqrt();
    }
    v
}

/// Probability weight of `|α⟩` on Fock states `≥ n`.
pub fn coherent_tail(alpha: f64, n: usize) -> f64 {
    let mut tail = 0.0;
    for m in n..n + 400 {
        let p = coherent_amplitude(alpha, m).powi(2);
        tail += p;
        if p < 1e-40 && m as f64 > alpha * alpha {
            break;
        }
    }
    tail
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm_dense(a: &Mat<C64>) -> Mat<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0u32;
    while norm1 / f64::from(1u32 << s.min(31)) > 0.25 && s < 60 {
        s += 1;
    }
    let scale = 0.5f64.powi(s as i32);
    let x = Mat::<C64>::from_fn(n, n, |i, j| a[(i, j)] * scale);
    let mut result = Mat::<C64>::identity(n, n);
    let mut term = Mat::<C64>::identity(n, n);
    for k in 1..=20 {
        term = dense_mul(&term, &x);
        let inv_k = 1.0 / k as f64;
        term = Mat::from_fn(n, n, |i, j| term[(i, j)] * inv_k);
        result = Mat::from_fn(n, n, |i, j| result[(i, j)] + term[(i, j)]);
        let tn = term.norm_max();
        if tn < 1e-18 * result.norm_max() {
            break;
        }
    }
    for _ in 0..s {
        result = dense_mul(&result, &result);
    }
    result
}

pub(crate) fn dense_mul(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    a * b
}

pub(crate) fn dense_to_sparse(m: &Mat<C64>, drop_below: f64) -> QOperator {
    let n = m.nrows();
    let mut t = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = m[(i, j)];
            if v.norm() > drop_below {
                t.push((i, j, v));
            }
        }
    }
    QOperator::from_triplets(n, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::hamiltonian::build_hamiltonian;

    #[test]
    fn zero_coupling_gives_identity() {
        let p = SystemParams { g: 0.0, ..SystemParams::default() };
        let t = polaron_transform(&p, &ModeLayout::new(3, 3, 6)).unwrap();
        assert_eq!(t.u, QOperator::identity(54));
    }

    #[test]
    fn unitary_and_displaces_vacuum() {
        let l = ModeLayout::new(4, 4, 16);
        let t = polaron_transform(&SystemParams::default(), &l).unwrap();
        assert!(t.unitarity_defect < 1e-12);
        assert!(t.displacement_error < 1e-8, "{}", t.displacement_error);
    }

    #[test]
    fn diagonalizes_undriven_hamiltonian() {
        let p = SystemParams { e1: 0.0, e2: 0.0, j: 0.0, ..SystemParams::default() };
        let l = ModeLayout::new(3, 3, 40);
        let h = build_hamiltonian(&p, &l).unwrap();
        let u = polaron_transform(&p, &l).unwrap().u;
        let ht = u.matmul(&h).matmul(&u.adjoint());
        // restrict to states far from the phonon cutoff
        let interior = |k: usize| l.occupation(k).2 < 4;
        let before: f64 = h.triplets().filter(|(r, c, _)| r != c && interior(*r) && interior(*c)).map(|(_, _, v)| v.norm_sqr()).sum();
        let after: f64 = ht.triplets().filter(|(r, c, _)| r != c && interior(*r) && interior(*c)).map(|(_, _, v)| v.norm_sqr()).sum();
        assert!(before > 0.1);
        assert!(after < 1e-16, "{after}");
        for k in (0..l.dim()).filter(|&k| interior(k)) {
            let (n1, n2, m) = l.occupation(k);
            let n = (n1 + n2) as f64;
            let e = p.delta1 * n1 as f64 + p.delta2 * n2 as f64 - p.delta_g() * n * n + m as f64;
            assert!((ht.get(k, k).re - e).abs() < 1e-9);
        }
    }

    #[test]
    fn expm_of_rotation_generator() {
        let theta = 0.7;
        let a = Mat::<C64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(-theta, 0.0),
            (1, 0) => C64::new(theta, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        let e = expm_dense(&a);
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-15);
        assert!((e[(1, 0)].re - theta.sin()).abs() < 1e-15);
    }
}
