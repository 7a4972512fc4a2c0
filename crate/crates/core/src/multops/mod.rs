//! Truncated multiplication operators and the row/column operator norms
//! built from them.
//!
//! A truncation at degree `D` restricts the domain to polynomials of degree
//! `<= D`. The codomain is always enlarged to degree `D + deg φ`, so the
//! matrices are exact on their domain and every truncated norm is a lower
//! bound for the true operator norm, non-decreasing in `D`.

mod counterexample;
mod leibnitz;

use std::collections::HashMap;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{KernelSpec, PointSet};
use crate::linalg::{SparseHermitian, SparseMatrix};
use crate::polyring::{monomials_up_to, MultiIndex, Polynomial};
use crate::spaces::{MonomialNormTable, SpaceSpec};

pub use counterexample::{
    counterexample_report, counterexample_sweep, counterexample_tuple, d_contraction_check,
    CounterexampleReport, CounterexampleRow,
};
pub use leibnitz::{
    leibnitz_check, row_from_column_report, scale_to_column_contraction, LeibnitzSetting,
    RowColumnReport,
};

/// Orthonormal monomial basis `e_α = z^α / ‖z^α‖`, `|α| <= D`, graded order.
#[derive(Debug, Clone)]
pub struct TruncationBasis {
    space: SpaceSpec,
    degree: u32,
    indices: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
    norms: Vec<f64>,
}

impl TruncationBasis {
    pub fn new(space: &SpaceSpec, degree: u32) -> Result<Self> {
        let table = MonomialNormTable::new(space.clone());
        let indices = monomials_up_to(space.dim(), degree);
        let norms = indices
            .iter()
            .map(|a| table.norm_sq(a).map(f64::sqrt))
            .collect::<Result<Vec<_>>>()?;
        let position = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Ok(TruncationBasis {
            space: space.clone(),
            degree,
            indices,
            position,
            norms,
        })
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.position.get(alpha).copied()
    }

    /// `‖z^α‖` of the `i`-th basis monomial.
    pub fn monomial_norm(&self, i: usize) -> f64 {
        self.norms[i]
    }

    /// Coordinates of `p` in the orthonormal basis.
    pub fn coords(&self, p: &Polynomial) -> Result<DVector<Complex64>> {
        if p.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: p.dim(),
            });
        }
        let mut v = DVector::zeros(self.len());
        for (a, c) in p.terms() {
            let i = self.index_of(a).ok_or(Error::DegreeBudget {
                needed: a.degree() as usize,
                available: self.degree as usize,
            })?;
            v[i] = c * self.norms[i];
        }
        Ok(v)
    }

    /// Inverse of [`coords`](Self::coords).
    pub fn polynomial(&self, v: &DVector<Complex64>) -> Polynomial {
        let terms = self
            .indices
            .iter()
            .zip(v.iter())
            .zip(&self.norms)
            .map(|((a, c), n)| (a.clone(), c / n));
        Polynomial::from_terms(self.space.dim(), terms).expect("dims agree")
    }
}

/// Matrix of `f ↦ φ f` from `domain` into `codomain`. Terms of `φ f` that
/// fall outside the codomain are dropped when `compress` is set and are an
/// error otherwise.
fn mult_matrix_between(
    domain: &TruncationBasis,
    codomain: &TruncationBasis,
    phi: &Polynomial,
    compress: bool,
) -> Result<SparseMatrix> {
    let dim = domain.space().dim();
    if phi.dim() != dim || codomain.space().dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if phi.dim() != dim {
                phi.dim()
            } else {
                codomain.space().dim()
            },
        });
    }
    let mut m = SparseMatrix::new(codomain.len(), domain.len());
    for (j, beta) in domain.indices().iter().enumerate() {
        let src_norm = domain.monomial_norm(j);
        for (gamma, c) in phi.terms() {
            let target = gamma.add_unchecked(beta);
            match codomain.index_of(&target) {
                Some(i) => m.push(i, j, c * (codomain.monomial_norm(i) / src_norm)),
                None if compress => {}
                None => {
                    return Err(Error::DegreeBudget {
                        needed: target.degree() as usize,
                        available: codomain.degree() as usize,
                    })
                }
            }
        }
    }
    Ok(m)
}

fn poly_degree(p: &Polynomial) -> u32 {
    p.degree().max(0) as u32
}

fn check_spaces(src: &SpaceSpec, dst: &SpaceSpec) -> Result<()> {
    if src.dim() != dst.dim() {
        return Err(Error::DimensionMismatch {
            expected: src.dim(),
            found: dst.dim(),
        });
    }
    Ok(())
}

/// Matrix of `M_φ: P_D(src) -> P_{D + deg φ}(dst)` in orthonormal monomial
/// bases (graded order on both sides). Exact on its domain.
pub fn mult_matrix(
    src: &SpaceSpec,
    dst: &SpaceSpec,
    phi: &Polynomial,
    degree: u32,
) -> Result<SparseMatrix> {
    check_spaces(src, dst)?;
    let domain = TruncationBasis::new(src, degree)?;
    let codomain = TruncationBasis::new(dst, degree + poly_degree(phi))?;
    mult_matrix_between(&domain, &codomain, phi, false)
}

/// Compression `P_D M_f P_D` in one space. Only Taylor coefficients of `f`
/// up to degree `D` matter, so `f` may be a Taylor polynomial of a
/// non-polynomial multiplier; the result's norm is a lower bound for
/// `‖M_f‖`.
pub fn compressed_mult_matrix(
    space: &SpaceSpec,
    f: &Polynomial,
    degree: u32,
) -> Result<SparseMatrix> {
    let basis = TruncationBasis::new(space, degree)?;
    mult_matrix_between(&basis, &basis, f, true)
}

/// Largest singular value of a dense matrix.
pub use crate::linalg::op_norm;

/// Finite family `Φ = (φ_1, ..., φ_m)` of multipliers sharing a dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierTuple {
    dim: usize,
    entries: Vec<Polynomial>,
}

impl MultiplierTuple {
    pub fn new(dim: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if let Some(p) = entries.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        Ok(MultiplierTuple { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().map(poly_degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: f64) -> MultiplierTuple {
        MultiplierTuple {
            dim: self.dim,
            entries: self.entries.iter().map(|p| p.scale_real(c)).collect(),
        }
    }

    /// Random tuple of `len` polynomials of degree `<= max_degree`.
    pub fn random<R: rand::Rng>(rng: &mut R, dim: usize, len: usize, max_degree: u32) -> Self {
        MultiplierTuple {
            dim,
            entries: (0..len)
                .map(|_| Polynomial::random(rng, dim, max_degree))
                .collect(),
        }
    }
}

fn tuple_blocks(
    src: &SpaceSpec,
    dst: &SpaceSpec,
    phis: &MultiplierTuple,
    degree: u32,
) -> Result<(TruncationBasis, TruncationBasis, Vec<SparseMatrix>)> {
    check_spaces(src, dst)?;
    if phis.dim() != src.dim() {
        return Err(Error::DimensionMismatch {
            expected: src.dim(),
            found: phis.dim(),
        });
    }
    let domain = TruncationBasis::new(src, degree)?;
    let codomain = TruncationBasis::new(dst, degree + phis.max_degree())?;
    let blocks = phis
        .entries()
        .iter()
        .map(|p| mult_matrix_between(&domain, &codomain, p, false))
        .collect::<Result<Vec<_>>>()?;
    Ok((domain, codomain, blocks))
}

/// Truncated norm of the column operator `h ↦ (φ_i h)_i`: the largest
/// singular value of the vertically stacked blocks, computed as
/// `sqrt(λ_max(Σ M_i^* M_i))`.
pub fn column_norm(
    src: &SpaceSpec,
    dst: &SpaceSpec,
    phis: &MultiplierTuple,
    degree: u32,
) -> Result<f64> {
    let (domain, _, blocks) = tuple_blocks(src, dst, phis, degree)?;
    let mut g = SparseHermitian::zeros(domain.len());
    for b in &blocks {
        b.add_gram_of_columns(&mut g);
    }
    Ok(g.max_eigenvalue().max(0.0).sqrt())
}

/// Truncated norm of the row operator `(h_i)_i ↦ Σ φ_i h_i` on
/// `⊕_i P_D(src)`: `sqrt(λ_max(Σ M_i M_i^*))`.
pub fn row_norm(
    src: &SpaceSpec,
    dst: &SpaceSpec,
    phis: &MultiplierTuple,
    degree: u32,
) -> Result<f64> {
    let (_, codomain, blocks) = tuple_blocks(src, dst, phis, degree)?;
    let mut g = SparseHermitian::zeros(codomain.len());
    for b in &blocks {
        b.add_gram_of_rows(&mut g);
    }
    Ok(g.max_eigenvalue().max(0.0).sqrt())
}

/// `max_z (Σ_i |φ_i(z)|²)^{1/2}` over the grid.
pub fn pointwise_l2_sup(phis: &MultiplierTuple, grid: &PointSet) -> Result<f64> {
    if phis.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            found: phis.dim(),
        });
    }
    Ok(grid
        .points()
        .iter()
        .map(|z| {
            phis.entries()
                .iter()
                .map(|p| p.eval_unchecked(z).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max))
}

/// `max_z Σ_i |φ_i(z)|² · ‖k^src_z‖² / ‖k^dst_z‖²` over the grid. At most 1
/// whenever the column operator is contractive.
pub fn kernel_ratio_bound(
    k_src: &KernelSpec,
    k_dst: &KernelSpec,
    phis: &MultiplierTuple,
    grid: &PointSet,
) -> Result<f64> {
    k_src.validate()?;
    k_dst.validate()?;
    for k in [k_src, k_dst] {
        if k.dim() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                found: k.dim(),
            });
        }
    }
    Ok(grid
        .points()
        .iter()
        .map(|z| {
            let s: f64 = phis
                .entries()
                .iter()
                .map(|p| p.eval_unchecked(z).norm_sqr())
                .sum();
            s * k_src.eval_unchecked(z, z).re / k_dst.eval_unchecked(z, z).re
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Exact,
}

/// One line of norm output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormRecord {
    pub space_src: String,
    pub space_dst: String,
    #[serde(rename = "D")]
    pub degree: u32,
    pub value: f64,
    pub bound_kind: BoundKind,
}
