use faer::{Mat, Side};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::gmres::{gmres, norm, GmresOptions};
use super::liouvillian::Liouvillian;
use super::sectors::{SectorMap, SectorSolver};
use crate::error::{Error, Result};
use crate::fock::QOperator;

/// Eigenvalues below this are logged as truncation noise.
pub const POSITIVITY_WARN: f64 = -1e-8;
/// Eigenvalues below this abort the solve.
pub const POSITIVITY_FAIL: f64 = -1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    Direct,
    InversePower,
}

#[derive(Clone, Debug)]
pub struct DensityState {
    /// Dense `d × d` density matrix, trace one and Hermitian.
    pub rho: Mat<C64>,
    /// `‖L vec(ρ)‖₂`.
    pub residual: f64,
    /// Krylov iterations (direct) or outer iterations (inverse power).
    pub iterations: usize,
    pub method: SolverMethod,
    pub min_eigenvalue: f64,
}

impl DensityState {
    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// `Tr(ρ A)`.
    pub fn expect(&self, op: &QOperator) -> C64 {
        op.triplets().map(|(r, c, v)| v * self.rho[(c, r)]).sum()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.rho[(i, i)]).sum()
    }

    /// `‖ρ − ρ†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityState) -> f64 {
        let d = self.dim();
        let diff = Mat::<C64>::from_fn(d, d, |i, j| self.rho[(i, j)] - other.rho[(i, j)]);
        let ev = diff
            .self_adjoint_eigenvalues(Side::Lower)
            .expect("Hermitian eigenvalues converge");
        0.5 * ev.iter().map(|x| x.abs()).sum::<f64>()
    }

    pub fn to_vec(&self) -> Vec<C64> {
        let d = self.dim();
        let mut v = vec![C64::new(0.0, 0.0); d * d];
        for j in 0..d {
            for i in 0..d {
                v[i + d * j] = self.rho[(i, j)];
            }
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct InversePowerOptions {
    /// Real shift `σ`; defaults to `1e−6` times the smaller cavity decay rate.
    pub shift: Option<f64>,
    pub max_iter: usize,
    /// Convergence threshold on `‖L vec(ρ)‖₂`.
    pub tol: f64,
    /// Starting density matrix in vectorized form; maximally mixed if absent.
    pub initial: Option<Vec<C64>>,
}

impl Default for InversePowerOptions {
    fn default() -> Self {
        InversePowerOptions { shift: None, max_iter: 500, tol: 1e-12, initial: None }
    }
}

fn linear_options() -> GmresOptions {
    GmresOptions { restart: 40, max_iter: 400, tol: 1e-12 }
}

// Inner solves of the inverse iteration only need to point in the right
// direction; the outer residual decides convergence.
fn inner_options() -> GmresOptions {
    GmresOptions { restart: 40, max_iter: 200, tol: 1e-9 }
}

fn trace_of(v: &[C64], d: usize) -> C64 {
    (0..d).map(|i| v[i + d * i]).sum()
}

/// Solves the bordered system in which the first row of `L x = 0` is
/// replaced by `Tr ρ = 1`.
///
/// The linear solve is GMRES preconditioned by the pump-free,
/// sector-triangular part of the bordered matrix, so the Krylov iteration
/// mainly has to resolve the weak drive. Unknowns and equations of the
/// sector at level `N + N'` are scaled by `r^(N+N')` and `r^−(N+N')`, with
/// `r` the drive ratio, so that the tolerance is relative within each sector
/// and two-photon coherences keep their significant digits.
pub fn steady_state_direct(l: &Liouvillian) -> Result<DensityState> {
    let d = l.hilbert_dim();
    let n = l.dim();
    let map = SectorMap::new(&l.layout);
    let trace_row = (0..d).map(|i| (0, i + d * i, C64::new(1.0, 0.0)));
    let bordered = QOperator::from_triplets(
        n,
        l.matrix.triplets().filter(|&(r, _, _)| r != 0).chain(trace_row),
    );
    let pre = SectorSolver::with_generator(&bordered, &map, &l.effective_hamiltonian, &l.layout, 0.0)?;
    let mut b = vec![C64::new(0.0, 0.0); n];
    b[0] = C64::new(1.0, 0.0);
    let out = scaled_gmres(&bordered, &pre, &map, l.drive_ratio, &b, linear_options(), true)?;
    finish(l, out.0, out.1, SolverMethod::Direct)
}

fn sector_scaling(map: &SectorMap, ratio: f64) -> Vec<f64> {
    let r = if ratio > 0.0 && ratio.is_finite() { ratio.clamp(1e-6, 1.0) } else { 1.0 };
    map.sector_of.iter().map(|&s| r.powi(map.level[s] as i32)).collect()
}

/// GMRES on `S⁻¹ A S y = S⁻¹ b`, `x = S y`.
fn scaled_gmres(
    a: &QOperator,
    pre: &SectorSolver,
    map: &SectorMap,
    ratio: f64,
    b: &[C64],
    opts: GmresOptions,
    strict: bool,
) -> Result<(Vec<C64>, usize)> {
    let s = sector_scaling(map, ratio);
    let scale = |v: &[C64]| -> Vec<C64> { v.iter().zip(&s).map(|(x, f)| x * f).collect() };
    let unscale = |v: &[C64]| -> Vec<C64> { v.iter().zip(&s).map(|(x, f)| x / f).collect() };
    let rhs = unscale(b);
    let out = gmres(
        |y| unscale(&a.apply(&scale(y))),
        |r| unscale(&pre.solve(&scale(r))),
        &rhs,
        None,
        opts,
    );
    if (strict && !out.converged) || !out.relative_residual.is_finite() {
        return Err(Error::NotConverged { iterations: out.iterations, residual: out.relative_residual });
    }
    Ok((scale(&out.x), out.iterations))
}

/// Inverse iteration `x ← (L − σ)⁻¹ x` with trace renormalization.
pub fn steady_state_inverse_power(l: &Liouvillian, opts: &InversePowerOptions) -> Result<DensityState> {
    let d = l.hilbert_dim();
    let n = l.dim();
    let kappa_min = min_cavity_rate(l);
    let shift = opts.shift.unwrap_or(1e-6 * kappa_min);
    if !(shift > 0.0) {
        return Err(Error::param("shift", "must be positive"));
    }
    let map = SectorMap::new(&l.layout);
    let shifted = &l.matrix - &QOperator::identity(n).scale_re(shift);
    let pre = SectorSolver::with_generator(&shifted, &map, &l.effective_hamiltonian, &l.layout, shift)?;
    let mut x = match &opts.initial {
        Some(v) if v.len() == n => v.clone(),
        Some(v) => {
            return Err(Error::param("initial", format!("length {} does not match {n}", v.len())));
        }
        None => {
            let mut v = vec![C64::new(0.0, 0.0); n];
            for i in 0..d {
                v[i + d * i] = C64::new(1.0 / d as f64, 0.0);
            }
            v
        }
    };
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let (y, _) = scaled_gmres(&shifted, &pre, &map, l.drive_ratio, &x, inner_options(), false)?;
        let tr = trace_of(&y, d);
        if tr.norm() == 0.0 || !tr.re.is_finite() {
            return Err(Error::NotConverged { iterations: it, residual });
        }
        x = y.iter().map(|v| v / tr).collect();
        residual = norm(&l.apply(&x));
        if residual < opts.tol {
            return finish(l, x, it, SolverMethod::InversePower);
        }
    }
    Err(Error::NotConverged { iterations: opts.max_iter, residual })
}

fn min_cavity_rate(l: &Liouvillian) -> f64 {
    // κ_j is recovered from the decay of |1⟩⟨1| into the vacuum.
    let lay = &l.layout;
    let d = lay.dim();
    let vac = lay.index(0, 0, 0);
    let rate = |k: usize| l.matrix.get(vac + d * vac, k + d * k).re;
    rate(lay.index(1, 0, 0)).min(rate(lay.index(0, 1, 0)))
}

fn finish(l: &Liouvillian, x: Vec<C64>, iterations: usize, method: SolverMethod) -> Result<DensityState> {
    let d = l.hilbert_dim();
    let tr = trace_of(&x, d);
    let rho = Mat::<C64>::from_fn(d, d, |i, j| 0.5 * (x[i + d * j] + x[j + d * i].conj()) / tr.re);
    let mut state = DensityState { rho, residual: 0.0, iterations, method, min_eigenvalue: 0.0 };
    state.residual = norm(&l.apply(&state.to_vec()));
    let ev = state
        .rho
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Unsupported(format!("eigenvalue solver failed: {e:?}")))?;
    state.min_eigenvalue = ev.first().copied().unwrap_or(0.0);
    if state.min_eigenvalue < POSITIVITY_FAIL {
        return Err(Error::Truncation { min_eigenvalue: state.min_eigenvalue });
    }
    if state.min_eigenvalue < POSITIVITY_WARN {
        log::warn!("steady state has eigenvalue {:e}; consider larger cutoffs", state.min_eigenvalue);
    }
    Ok(state)
}
