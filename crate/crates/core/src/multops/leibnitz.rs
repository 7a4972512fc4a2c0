//! Empirical constants for the Leibnitz-type estimates and for the
//! row-from-column bound. Nothing here asserts a bound; callers compare the
//! reported constants against whatever they are checking.

use serde::{Deserialize, Serialize};

use super::{column_norm, row_norm, MultiplierTuple};
use crate::error::{Error, Result};
use crate::polyring::Polynomial;
use crate::spaces::{RadialWeight, SpaceSpec};

/// Pair of weights `(w, w̃)` at integer order `N` in dimension `dim`:
/// `h` is measured in `B^N_w`, products in `B^m_w̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeibnitzSetting {
    pub dim: usize,
    pub order: u32,
    pub weight: RadialWeight,
    pub weight_tilde: RadialWeight,
}

impl LeibnitzSetting {
    pub fn src_level(&self, m: u32) -> Result<SpaceSpec> {
        SpaceSpec::besov(self.dim, m as f64, self.weight.clone())
    }

    pub fn dst_level(&self, m: u32) -> Result<SpaceSpec> {
        SpaceSpec::besov(self.dim, m as f64, self.weight_tilde.clone())
    }
}

/// `max_h Σ_i ‖(R^j φ_i)(R^k h)‖²_{B^{N-(j+k)}_w̃} / ‖h‖²_{B^N_w}` over
/// the nonzero samples.
pub fn leibnitz_check(
    setting: &LeibnitzSetting,
    phis: &MultiplierTuple,
    j: u32,
    k: u32,
    samples: &[Polynomial],
) -> Result<f64> {
    if j + k > setting.order {
        return Err(Error::InvalidParameter(format!(
            "j + k = {} exceeds N = {}",
            j + k,
            setting.order
        )));
    }
    if phis.dim() != setting.dim {
        return Err(Error::DimensionMismatch {
            expected: setting.dim,
            found: phis.dim(),
        });
    }
    let src = setting.src_level(setting.order)?;
    let dst = setting.dst_level(setting.order - j - k)?;
    let derived: Vec<Polynomial> = phis.entries().iter().map(|p| radial_power(p, j)).collect();
    let mut worst = 0.0f64;
    for h in samples {
        let denom = src.norm(h)?.powi(2);
        if denom == 0.0 {
            continue;
        }
        let rh = radial_power(h, k);
        let mut num = 0.0;
        for p in &derived {
            num += dst.norm(&p.checked_mul(&rh)?)?.powi(2);
        }
        worst = worst.max(num / denom);
    }
    Ok(worst)
}

/// `R^m` with `R^0` the identity (integer orders keep constants at `m = 0`).
fn radial_power(p: &Polynomial, m: u32) -> Polynomial {
    if m == 0 {
        p.clone()
    } else {
        p.radial_derivative(m as f64)
    }
}

/// `Φ` rescaled so its column norm truncated at `D` equals one. A zero
/// tuple is returned unchanged.
pub fn scale_to_column_contraction(
    src: &SpaceSpec,
    dst: &SpaceSpec,
    phis: &MultiplierTuple,
    degree: u32,
) -> Result<MultiplierTuple> {
    let c = column_norm(src, dst, phis, degree)?;
    Ok(if c > 0.0 {
        phis.scale(1.0 / c)
    } else {
        phis.clone()
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowColumnReport {
    #[serde(rename = "D")]
    pub degree: u32,
    /// `max row/column` over the samples with nonzero column norm.
    pub empirical_c: f64,
    pub ratios: Vec<f64>,
}

/// Empirical constant of `‖Φ^R‖ <= c ‖Φ^C‖` at truncation `D`.
pub fn row_from_column_report(
    src: &SpaceSpec,
    dst: &SpaceSpec,
    samples: &[MultiplierTuple],
    degree: u32,
) -> Result<RowColumnReport> {
    let mut ratios = Vec::with_capacity(samples.len());
    for phis in samples {
        let col = column_norm(src, dst, phis, degree)?;
        if col == 0.0 {
            continue;
        }
        ratios.push(row_norm(src, dst, phis, degree)? / col);
    }
    Ok(RowColumnReport {
        degree,
        empirical_c: ratios.iter().copied().fold(0.0, f64::max),
        ratios,
    })
}
