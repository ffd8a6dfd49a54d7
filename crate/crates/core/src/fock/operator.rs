//! Sparse complex square matrices in compressed-row form.

use std::ops::{Add, Mul, Neg, Sub};

use faer::Mat;
use num_complex::Complex64 as C64;

/// A square complex matrix stored in CSR layout with sorted column indices
/// and no duplicate entries.
#[derive(Clone, Debug, PartialEq)]
pub struct QOperator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl QOperator {
    /// Builds an operator from `(row, col, value)` triplets. Repeated
    /// positions are summed and exact zeros dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut t: Vec<(usize, usize, C64)> = triplets.into_iter().collect();
        for &(r, c, _) in &t {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside a {dim}x{dim} operator");
        }
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; dim + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut values: Vec<C64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            indptr[r + 1] += indptr[r];
        }
        QOperator { dim, indptr, indices, values }.pruned()
    }

    fn pruned(self) -> Self {
        if self.values.iter().all(|v| *v != C64::new(0.0, 0.0)) {
            return self;
        }
        let mut indptr = vec![0usize; self.dim + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.dim {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.values[k] != C64::new(0.0, 0.0) {
                    indices.push(self.indices[k]);
                    values.push(self.values[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        QOperator { dim: self.dim, indptr, indices, values }
    }

    pub fn zeros(dim: usize) -> Self {
        QOperator {
            dim,
            indptr: vec![0; dim + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_triplets(diag.len(), diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Annihilation operator on a single mode truncated to `n` Fock states.
    pub fn annihilation(n: usize) -> Self {
        Self::from_triplets(n, (1..n).map(|k| (k - 1, k, C64::new((k as f64).sqrt(), 0.0))))
    }

    /// Number operator on a single mode truncated to `n` Fock states.
    pub fn number(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|k| (k, k, C64::new(k as f64, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let range = self.indptr[row]..self.indptr[row + 1];
        match self.indices[range.clone()].binary_search(&col) {
            Ok(k) => self.values[range.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Stored entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k]))
        })
    }

    /// Stored entries of one row as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn kron(&self, other: &QOperator) -> QOperator {
        let n = other.dim;
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in other.triplets() {
                t.push((r1 * n + r2, c1 * n + c2, v1 * v2));
            }
        }
        QOperator::from_triplets(self.dim * n, t)
    }

    /// Kronecker product of a list of factors, leftmost factor outermost.
    pub fn kron_all(factors: &[&QOperator]) -> QOperator {
        let mut acc = QOperator::identity(1);
        for f in factors {
            acc = acc.kron(f);
        }
        acc
    }

    pub fn matmul(&self, other: &QOperator) -> QOperator {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let mut t = Vec::new();
        let mut acc = vec![C64::new(0.0, 0.0); self.dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.dim];
        for r in 0..self.dim {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            for &c in &touched {
                t.push((r, c, acc[c]));
                acc[c] = C64::new(0.0, 0.0);
                seen[c] = false;
            }
            touched.clear();
        }
        QOperator::from_triplets(self.dim, t)
    }

    pub fn scale(&self, s: C64) -> QOperator {
        QOperator::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (r, c, v * s)))
    }

    pub fn scale_re(&self, s: f64) -> QOperator {
        self.scale(C64::new(s, 0.0))
    }

    pub fn transpose(&self) -> QOperator {
        QOperator::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v)))
    }

    pub fn conj(&self) -> QOperator {
        QOperator::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (r, c, v.conj())))
    }

    pub fn adjoint(&self) -> QOperator {
        QOperator::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn commutator(&self, other: &QOperator) -> QOperator {
        &self.matmul(other) - &other.matmul(self)
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                s += self.values[k] * x[self.indices[k]];
            }
            *yr = s;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> Mat<C64> {
        let mut m = Mat::<C64>::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &QOperator) -> f64 {
        (self - other).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Sum of squared moduli of entries off the main diagonal.
    pub fn off_diagonal_norm_sqr(&self) -> f64 {
        self.triplets()
            .filter(|(r, c, _)| r != c)
            .map(|(_, _, v)| v.norm_sqr())
            .sum()
    }

    /// Permutes basis states: the result has entry `(p[r], p[c]) = A[r, c]`.
    pub fn permuted(&self, perm: &[usize]) -> QOperator {
        assert_eq!(perm.len(), self.dim);
        QOperator::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (perm[r], perm[c], v)))
    }
}

impl Add for &QOperator {
    type Output = QOperator;
    fn add(self, rhs: &QOperator) -> QOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        QOperator::from_triplets(self.dim, self.triplets().chain(rhs.triplets()))
    }
}

impl Sub for &QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        QOperator::from_triplets(
            self.dim,
            self.triplets().chain(rhs.triplets().map(|(r, c, v)| (r, c, -v))),
        )
    }
}

impl Neg for &QOperator {
    type Output = QOperator;
    fn neg(self) -> QOperator {
        self.scale_re(-1.0)
    }
}

impl Mul for &QOperator {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        self.matmul(rhs)
    }
}

impl Mul<&QOperator> for C64 {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        rhs.scale(self)
    }
}

impl Mul<&QOperator> for f64 {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        rhs.scale_re(self)
    }
}
