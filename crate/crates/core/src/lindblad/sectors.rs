//! Photon-number sector structure of the superoperator.
//!
//! A superoperator index `i + d·j` belongs to the sector
//! `(N(i), N(j))`, the total photon numbers of ket and bra. Everything in
//! the generator except the pump keeps the sector or lowers both numbers by
//! one, so ordering sectors by decreasing `N(i) + N(j)` makes the
//! pump-free part block triangular. [`SectorSolver`] factors the diagonal
//! blocks and applies that triangular operator's inverse, which serves as
//! the preconditioner for the full solve.

use faer::prelude::*;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::QOperator;
use crate::params::ModeLayout;

#[derive(Clone, Debug)]
pub struct SectorMap {
    /// Sector id per superoperator index.
    pub sector_of: Vec<usize>,
    /// Position of each superoperator index inside its sector.
    pub local: Vec<usize>,
    /// Global indices of each sector, ascending.
    pub members: Vec<Vec<usize>>,
    /// `N(i) + N(j)` per sector.
    pub level: Vec<usize>,
    /// `(N_ket, N_bra)` per sector.
    pub label: Vec<(usize, usize)>,
    /// Number of Hilbert states with `N` photons, indexed by `N`.
    pub photon_dim: Vec<usize>,
}

impl SectorMap {
    pub fn new(layout: &ModeLayout) -> Self {
        let d = layout.dim();
        let nmax = layout.max_photons() + 1;
        let n_sec = nmax * nmax;
        let photons: Vec<usize> = (0..d).map(|i| layout.total_photons(i)).collect();
        let mut sector_of = vec![0; d * d];
        let mut local = vec![0; d * d];
        let mut members = vec![Vec::new(); n_sec];
        for j in 0..d {
            for i in 0..d {
                let k = i + d * j;
                let s = photons[i] * nmax + photons[j];
                sector_of[k] = s;
                local[k] = members[s].len();
                members[s].push(k);
            }
        }
        let label = (0..n_sec).map(|s| (s / nmax, s % nmax)).collect::<Vec<_>>();
        let level = label.iter().map(|(a, b)| a + b).collect();
        let mut photon_dim = vec![0; nmax];
        for &p in &photons {
            photon_dim[p] += 1;
        }
        SectorMap { sector_of, local, members, level, label, photon_dim }
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Eigendecomposition `H_eff|_N = V diag(e) V⁻¹` of the effective
/// Hamiltonian restricted to one photon-number subspace.
struct PhotonBlock {
    v: Mat<C64>,
    v_inv: Mat<C64>,
    v_adj: Mat<C64>,
    v_inv_adj: Mat<C64>,
    e: Vec<C64>,
}

/// Above this `‖V‖_F‖V⁻¹‖_F` a sector falls back to sparse factorization.
const MAX_EIGENBASIS_CONDITION: f64 = 1e8;

impl PhotonBlock {
    fn new(h_eff: &QOperator, states: &[usize]) -> Option<Self> {
        let n = states.len();
        let mut pos = vec![usize::MAX; h_eff.dim()];
        for (k, &s) in states.iter().enumerate() {
            pos[s] = k;
        }
        let mut h = Mat::<C64>::zeros(n, n);
        for (k, &s) in states.iter().enumerate() {
            for (c, v) in h_eff.row(s) {
                if pos[c] != usize::MAX {
                    h[(k, pos[c])] = v;
                }
            }
        }
        let evd = h.eigen().ok()?;
        let v = evd.U().to_owned();
        let e: Vec<C64> = evd.S().column_vector().iter().copied().collect();
        let v_inv = v.partial_piv_lu().inverse();
        let cond = v.norm_l2() * v_inv.norm_l2();
        if !cond.is_finite() || cond > MAX_EIGENBASIS_CONDITION {
            return None;
        }
        let v_adj = v.adjoint().to_owned();
        let v_inv_adj = v_inv.adjoint().to_owned();
        Some(PhotonBlock { v, v_inv, v_adj, v_inv_adj, e })
    }
}

enum BlockSolver {
    Lu(Lu<usize, C64>),
    /// `A X + X B − σX = R` with `A = −iH_eff|_N`, `B = iH_eff|_N'†`.
    Sylvester { ket: usize, bra: usize },
}

/// Inverse of the sector-triangular part of a matrix `A`: the diagonal
/// sector blocks plus every entry that couples a row to a sector of
/// strictly higher level.
///
/// With [`SectorSolver::with_generator`], sectors other than the vacuum
/// sector are inverted through the eigenbasis of the effective Hamiltonian,
/// ignoring the mechanical jump terms inside the sector; such a solver is
/// an approximate inverse meant for preconditioning.
pub struct SectorSolver {
    blocks: Vec<Option<BlockSolver>>,
    photon_blocks: Vec<Option<PhotonBlock>>,
    members: Vec<Vec<usize>>,
    ket_dim: Vec<usize>,
    order: Vec<usize>,
    upper: QOperator,
    local: Vec<usize>,
    shift: f64,
}

impl SectorSolver {
    /// Exact block-triangular inverse, every sector factored.
    pub fn new(a: &QOperator, map: &SectorMap) -> Result<Self> {
        Self::build(a, map, None, 0.0)
    }

    /// `a` must equal the generator minus `shift·I`, up to rows of the
    /// vacuum sector.
    pub fn with_generator(
        a: &QOperator,
        map: &SectorMap,
        h_eff: &QOperator,
        layout: &ModeLayout,
        shift: f64,
    ) -> Result<Self> {
        Self::build(a, map, Some((h_eff, layout)), shift)
    }

    fn build(
        a: &QOperator,
        map: &SectorMap,
        generator: Option<(&QOperator, &ModeLayout)>,
        shift: f64,
    ) -> Result<Self> {
        let n = a.dim();
        assert_eq!(n, map.sector_of.len());
        let nmax = map.photon_dim.len();
        let photon_blocks: Vec<Option<PhotonBlock>> = match generator {
            Some((h_eff, layout)) => (0..nmax)
                .map(|np| {
                    let states: Vec<usize> =
                        (0..layout.dim()).filter(|&i| layout.total_photons(i) == np).collect();
                    PhotonBlock::new(h_eff, &states)
                })
                .collect(),
            None => (0..nmax).map(|_| None).collect(),
        };
        let use_sylvester = |s: usize| {
            let (k, b) = map.label[s];
            map.level[s] > 0 && photon_blocks[k].is_some() && photon_blocks[b].is_some()
        };

        let mut block_trip: Vec<Vec<Triplet<usize, usize, C64>>> = vec![Vec::new(); map.count()];
        let mut upper = Vec::new();
        for (r, c, v) in a.triplets() {
            let (sr, sc) = (map.sector_of[r], map.sector_of[c]);
            if sr == sc {
                if !use_sylvester(sr) {
                    block_trip[sr].push(Triplet::new(map.local[r], map.local[c], v));
                }
            } else if map.level[sc] > map.level[sr] {
                upper.push((r, c, v));
            }
        }
        let mut blocks = Vec::with_capacity(map.count());
        let mut ket_dim = Vec::with_capacity(map.count());
        for (s, trip) in block_trip.into_iter().enumerate() {
            let size = map.members[s].len();
            let (k, b) = map.label[s];
            ket_dim.push(map.photon_dim[k]);
            if size == 0 {
                blocks.push(None);
                continue;
            }
            if use_sylvester(s) {
                blocks.push(Some(BlockSolver::Sylvester { ket: k, bra: b }));
                continue;
            }
            let singular = || {
                Error::DegenerateSteadyState(format!(
                    "sector {:?} of the generator is singular",
                    map.label[s]
                ))
            };
            let mat = SparseColMat::<usize, C64>::try_new_from_triplets(size, size, &trip)
                .map_err(|e| Error::Unsupported(format!("sparse assembly failed: {e:?}")))?;
            let lu = mat.sp_lu().map_err(|_| singular())?;
            // a zero pivot shows up as non-finite output
            let mut probe = Mat::<C64>::from_fn(size, 1, |i, _| C64::new(1.0 + i as f64 * 1e-3, 0.0));
            lu.solve_in_place(probe.as_mut());
            if (0..size).any(|i| !probe[(i, 0)].re.is_finite() || !probe[(i, 0)].im.is_finite()) {
                return Err(singular());
            }
            blocks.push(Some(BlockSolver::Lu(lu)));
        }
        let mut order: Vec<usize> = (0..map.count()).filter(|&s| blocks[s].is_some()).collect();
        order.sort_by_key(|&s| std::cmp::Reverse(map.level[s]));
        Ok(SectorSolver {
            blocks,
            photon_blocks,
            members: map.members.clone(),
            ket_dim,
            order,
            upper: QOperator::from_triplets(n, upper),
            local: map.local.clone(),
            shift,
        })
    }

    /// Number of sectors inverted through the eigenbasis.
    pub fn sylvester_sectors(&self) -> usize {
        self.blocks.iter().filter(|b| matches!(b, Some(BlockSolver::Sylvester { .. }))).count()
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let mut x = vec![C64::new(0.0, 0.0); rhs.len()];
        for &s in &self.order {
            let members = &self.members[s];
            let kd = self.ket_dim[s];
            let mut b = Mat::<C64>::zeros(members.len(), 1);
            for &g in members {
                let mut v = rhs[g];
                for (c, a) in self.upper.row(g) {
                    v -= a * x[c];
                }
                b[(self.local[g], 0)] = v;
            }
            match self.blocks[s].as_ref().expect("ordered sectors are populated") {
                BlockSolver::Lu(lu) => lu.solve_in_place(b.as_mut()),
                BlockSolver::Sylvester { ket, bra } => {
                    let (pk, pb) = (
                        self.photon_blocks[*ket].as_ref().unwrap(),
                        self.photon_blocks[*bra].as_ref().unwrap(),
                    );
                    let bd = members.len() / kd;
                    let r = Mat::<C64>::from_fn(kd, bd, |p, q| b[(p + kd * q, 0)]);
                    let mut y = &(&pk.v_inv * &r) * &pb.v_inv_adj;
                    let i = C64::new(0.0, 1.0);
                    for q in 0..bd {
                        for p in 0..kd {
                            let den = -i * pk.e[p] + i * pb.e[q].conj() - self.shift;
                            y[(p, q)] /= den;
                        }
                    }
                    let xs = &(&pk.v * &y) * &pb.v_adj;
                    for q in 0..bd {
                        for p in 0..kd {
                            b[(p + kd * q, 0)] = xs[(p, q)];
                        }
                    }
                }
            }
            for &g in members {
                x[g] = b[(self.local[g], 0)];
            }
        }
        x
    }
}
