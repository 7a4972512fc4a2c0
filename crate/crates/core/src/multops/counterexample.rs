//! A family of Drury-Arveson multipliers whose row operator is bounded while
//! the column operator is not.
//!
//! For words `μ = (μ_1, ..., μ_n)` over `{1, ..., d}` put
//! `φ_μ = z_{μ_1} ⋯ z_{μ_n} / n`. Words with the same content `α` give the
//! same function, with multiplicity `|α|!/α!`; we store one entry per `α`
//! scaled by `sqrt(|α|!/α!)`, which leaves `Σ M_μ^* M_μ` and `Σ M_μ M_μ^*`
//! (hence both operator norms) unchanged.

use serde::{Deserialize, Serialize};

use super::{row_norm, MultiplierTuple};
use crate::error::{Error, Result};
use crate::polyring::{factorial_f64, monomials_of_degree, Polynomial};
use crate::spaces::SpaceSpec;

/// Collapsed family `{φ_μ : l(μ) <= n_max}` in dimension `d >= 2`.
pub fn counterexample_tuple(dim: usize, n_max: u32) -> Result<MultiplierTuple> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: dim });
    }
    let mut entries = Vec::new();
    for n in 1..=n_max {
        for alpha in monomials_of_degree(dim, n) {
            let multiplicity = factorial_f64(n) / alpha.factorial();
            let c = multiplicity.sqrt() / n as f64;
            entries.push(Polynomial::monomial(alpha, c.into()));
        }
    }
    MultiplierTuple::new(dim, entries)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleRow {
    pub n: u32,
    /// `Σ_{l(μ) <= n} ‖φ_μ‖² = ‖Φ^C 1‖²`.
    pub column_sq_lower: f64,
    /// Truncated row norm of the family cut at length `n`.
    pub row_upper_truncated: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub dim: usize,
    pub n_max: u32,
    #[serde(rename = "D")]
    pub degree: u32,
    /// Lower bound for `‖Φ^C‖²` (exact value of `‖Φ^C 1‖²`).
    pub column_sq_lower: f64,
    /// Row norm truncated at `D`; a lower bound for `‖Φ^R‖`.
    pub row_upper_truncated: f64,
    /// `Σ_{n <= n_max} 1/n²`, the proven bound on `‖Φ^R‖²`.
    pub row_sq_bound: f64,
}

impl CounterexampleReport {
    pub fn row_within_bound(&self, tol: f64) -> bool {
        self.row_upper_truncated.powi(2) <= self.row_sq_bound + tol
    }
}

fn column_sq(space: &SpaceSpec, phis: &MultiplierTuple) -> Result<f64> {
    phis.entries()
        .iter()
        .map(|p| space.norm(p).map(|v| v * v))
        .sum()
}

pub fn counterexample_report(dim: usize, n_max: u32, degree: u32) -> Result<CounterexampleReport> {
    let phis = counterexample_tuple(dim, n_max)?;
    let da = SpaceSpec::drury_arveson(dim)?;
    Ok(CounterexampleReport {
        dim,
        n_max,
        degree,
        column_sq_lower: column_sq(&da, &phis)?,
        row_upper_truncated: row_norm(&da, &da, &phis, degree)?,
        row_sq_bound: (1..=n_max).map(|n| 1.0 / (n as f64).powi(2)).sum(),
    })
}

/// Rows `n = 1..=n_max` of the sweep at fixed truncation `D`.
pub fn counterexample_sweep(dim: usize, n_max: u32, degree: u32) -> Result<Vec<CounterexampleRow>> {
    (1..=n_max)
        .map(|n| {
            let r = counterexample_report(dim, n, degree)?;
            Ok(CounterexampleRow {
                n,
                column_sq_lower: r.column_sq_lower,
                row_upper_truncated: r.row_upper_truncated,
            })
        })
        .collect()
}

/// `Σ ‖f_k‖² - ‖Σ z_k f_k‖²` in `H²_d`, `d = fs.len()`.
pub fn d_contraction_check(fs: &[Polynomial]) -> Result<f64> {
    let dim = fs.len();
    let da = SpaceSpec::drury_arveson(dim)?;
    let mut combo = Polynomial::zero(dim);
    let mut total = 0.0;
    for (k, f) in fs.iter().enumerate() {
        total += da.norm(f)?.powi(2);
        combo = combo.checked_add(&Polynomial::coordinate(dim, k).checked_mul(f)?)?;
    }
    Ok(total - da.norm(&combo)?.powi(2))
}
