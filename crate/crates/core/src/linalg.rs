//! Dense Hermitian matrices, sparse rectangular matrices, and the spectral
//! quantities the rest of the crate needs (extreme eigenvalues, operator
//! norms, Schur products).

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Absolute Hermitian tolerance, scaled by `max(1, max |M_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Complex matrix equal to its conjugate transpose (within [`HERMITIAN_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::OrderMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        let defect = hermitian_defect(&m);
        let scale = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { defect });
        }
        Ok(HermitianMatrix(m))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianMatrix(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::default()
            }
        }))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(CMatrix::identity(n, n))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Spectral norm `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max)
    }

    pub fn schur_product(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        schur_product(self, other)
    }
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// first so round-off asymmetry cannot leak into the solver.
fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![m[(0, 0)].re];
    }
    let sym = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_eigenvalue(m: &HermitianMatrix) -> f64 {
    m.min_eigenvalue()
}

/// Smallest eigenvalue of an arbitrary square matrix, rejecting
/// non-Hermitian input.
pub fn min_eigenvalue_checked(m: &CMatrix) -> Result<f64> {
    Ok(HermitianMatrix::new(m.clone())?.min_eigenvalue())
}

/// Entrywise (Hadamard) product.
pub fn schur_product(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(HermitianMatrix(a.0.component_mul(&b.0)))
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Hermitian matrix stored by its nonzero entries. Extreme eigenvalues are
/// computed per connected component of the sparsity graph, which is exact
/// and turns e.g. the diagonal Grams of monomial multipliers into `O(n)`
/// work.
#[derive(Debug, Clone)]
pub struct SparseHermitian {
    n: usize,
    entries: HashMap<(usize, usize), Complex64>,
}

impl SparseHermitian {
    pub fn zeros(n: usize) -> Self {
        SparseHermitian {
            n,
            entries: HashMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        *self.entries.entry((i, j)).or_default() += v;
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(i, j) in self.entries.keys() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for x in 0..self.n {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }

    fn component_eigenvalues(&self) -> Vec<Vec<f64>> {
        let comps = self.components();
        let mut local = vec![0usize; self.n];
        let mut owner = vec![0usize; self.n];
        for (c, g) in comps.iter().enumerate() {
            for (k, &x) in g.iter().enumerate() {
                local[x] = k;
                owner[x] = c;
            }
        }
        let mut blocks: Vec<CMatrix> = comps
            .iter()
            .map(|g| CMatrix::zeros(g.len(), g.len()))
            .collect();
        for (&(i, j), &v) in &self.entries {
            blocks[owner[i]][(local[i], local[j])] += v;
        }
        blocks.iter().map(hermitian_eigenvalues).collect()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.component_eigenvalues()
            .iter()
            .filter_map(|e| e.last().copied())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.component_eigenvalues()
            .iter()
            .filter_map(|e| e.first().copied())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.n);
        for (&(i, j), &v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }
}

/// Rectangular sparse matrix stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn push(&mut self, row: usize, col: usize, v: Complex64) {
        debug_assert!(row < self.nrows);
        if v != Complex64::default() {
            self.cols[col].push((row, v));
        }
    }

    pub fn column(&self, col: usize) -> &[(usize, Complex64)] {
        &self.cols[col]
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.cols[col]
            .iter()
            .filter(|(r, _)| *r == row)
            .map(|(_, v)| *v)
            .sum()
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.nrows, self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Accumulate `M^* M` into `acc` (order `ncols`).
    pub fn add_gram_of_columns(&self, acc: &mut SparseHermitian) {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                rows[i].push((j, v));
            }
        }
        for row in &rows {
            for &(j1, v1) in row {
                for &(j2, v2) in row {
                    acc.add(j1, j2, v1.conj() * v2);
                }
            }
        }
    }

    /// Accumulate `M M^*` into `acc` (order `>= nrows`).
    pub fn add_gram_of_rows(&self, acc: &mut SparseHermitian) {
        for col in &self.cols {
            for &(i1, v1) in col {
                for &(i2, v2) in col {
                    acc.add(i1, i2, v1 * v2.conj());
                }
            }
        }
    }

    /// Largest singular value, via the smaller Gram matrix.
    pub fn op_norm(&self) -> f64 {
        let lam = if self.ncols() <= self.nrows {
            let mut g = SparseHermitian::zeros(self.ncols());
            self.add_gram_of_columns(&mut g);
            g.max_eigenvalue()
        } else {
            let mut g = SparseHermitian::zeros(self.nrows);
            self.add_gram_of_rows(&mut g);
            g.max_eigenvalue()
        };
        lam.max(0.0).sqrt()
    }
}
