//! Radially weighted Besov spaces `B^s_w` on the unit ball of `C^d`, and the
//! kernel-defined spaces (Drury-Arveson, power-kernel spaces, Dirichlet)
//! used alongside them.
//!
//! All norms here are diagonal in the monomial basis. For a radial weight
//! `w`, polar coordinates with the normalized volume `dV = 2d r^{2d-1} dr dσ`
//! and the sphere moment `∫ |ζ^α|² dσ = (d-1)! α! / (d-1+|α|)!` give
//!
//! ```text
//! ‖z^α‖²_{L²_a(w)} = 2d · (d-1)! α! / (d-1+|α|)! · ∫_0^1 r^{2|α|+2d-1} w(r) dr
//! ```
//!
//! which for `w = 1` is the Bergman value `d! α! / (d+|α|)!`.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::polyring::{MultiIndex, Polynomial};

#[derive(Debug, Clone, PartialEq)]
pub enum RadialWeight {
    /// `w = 1`.
    One,
    /// `w(z) = (1 - |z|²)^a`, `a > -1`.
    Standard { a: f64 },
    /// Moments `∫_0^1 r^k w(r) dr` supplied directly for `k = 0, 1, ...`.
    Tabulated { moments: Vec<f64> },
}

impl RadialWeight {
    pub fn standard(a: f64) -> Result<Self> {
        if !(a > -1.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "standard weight exponent a = {a} must be > -1"
            )));
        }
        Ok(RadialWeight::Standard { a })
    }

    pub fn tabulated(moments: Vec<f64>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::InvalidParameter("empty moment table".into()));
        }
        if moments.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidParameter(
                "tabulated moments must be positive and finite".into(),
            ));
        }
        if moments.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated moments must be non-increasing".into(),
            ));
        }
        Ok(RadialWeight::Tabulated { moments })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            RadialWeight::One => "one",
            RadialWeight::Standard { .. } => "standard",
            RadialWeight::Tabulated { .. } => "tabulated",
        }
    }

    /// `∫_0^1 r^k w(r) dr`.
    pub fn moment(&self, k: usize) -> Result<f64> {
        match self {
            RadialWeight::One => Ok(1.0 / (k as f64 + 1.0)),
            // substitute t = r²: ½ B((k+1)/2, a+1)
            RadialWeight::Standard { a } => {
                let x = (k as f64 + 1.0) / 2.0;
                Ok(0.5 * (ln_gamma(x) + ln_gamma(a + 1.0) - ln_gamma(x + a + 1.0)).exp())
            }
            RadialWeight::Tabulated { moments } => {
                moments.get(k).copied().ok_or(Error::MomentOutOfRange {
                    index: k,
                    available: moments.len(),
                })
            }
        }
    }

    /// Radial density `w(r)`, when the weight has one.
    pub fn density(&self, r: f64) -> Result<f64> {
        match self {
            RadialWeight::One => Ok(1.0),
            RadialWeight::Standard { a } => Ok((1.0 - r * r).max(0.0).powf(*a)),
            RadialWeight::Tabulated { .. } => Err(Error::NonEvaluableWeight("tabulated")),
        }
    }

    /// `‖w‖_{L¹(dV)}` on the ball of `C^dim`.
    pub fn l1_norm(&self, dim: usize) -> Result<f64> {
        Ok(2.0 * dim as f64 * self.moment(2 * dim - 1)?)
    }
}

/// `∫_0^1 t^n (1-t)^a dt = Γ(n+1)Γ(a+1)/Γ(n+a+2)`.
pub fn beta_moment(n: u32, a: f64) -> Result<f64> {
    if !(a > -1.0) {
        return Err(Error::InvalidParameter(format!("a = {a} must be > -1")));
    }
    let n = n as f64;
    Ok((ln_gamma(n + 1.0) + ln_gamma(a + 1.0) - ln_gamma(n + a + 2.0)).exp())
}

/// `∫_S |ζ^α|² dσ = (d-1)! α! / (d-1+|α|)!` for normalized surface measure.
pub fn sphere_moment(alpha: &MultiIndex) -> f64 {
    let d = alpha.dim() as f64;
    let n = alpha.degree() as f64;
    let log_alpha: f64 = alpha
        .exponents()
        .iter()
        .map(|&a| ln_gamma(a as f64 + 1.0))
        .sum();
    (ln_gamma(d) + log_alpha - ln_gamma(d + n)).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// `‖f‖² = ‖f_0‖²_{L²_a(w)} + Σ_{n≥1} n^{2s} ‖f_n‖²_{L²_a(w)}`.
    Besov { s: f64, weight: RadialWeight },
    /// Space with kernel `(1 - ⟨z,w⟩)^{-β}`: `‖z^α‖² = α! / (β)_{|α|}`.
    /// `β = 1` is the Drury-Arveson space.
    KernelPower { beta: f64 },
    /// Dirichlet space of the disc, `‖z^n‖² = n + 1`.
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceConfig", into = "SpaceConfig")]
pub struct SpaceSpec {
    dim: usize,
    kind: SpaceKind,
}

impl SpaceSpec {
    pub fn besov(dim: usize, s: f64, weight: RadialWeight) -> Result<Self> {
        check_dim(dim)?;
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("smoothness s = {s}")));
        }
        if let RadialWeight::Standard { a } = weight {
            RadialWeight::standard(a)?;
        }
        Ok(SpaceSpec {
            dim,
            kind: SpaceKind::Besov { s, weight },
        })
    }

    /// `L²_a(w)`.
    pub fn weighted_bergman(dim: usize, weight: RadialWeight) -> Result<Self> {
        Self::besov(dim, 0.0, weight)
    }

    pub fn drury_arveson(dim: usize) -> Result<Self> {
        Self::kernel_power(dim, 1.0)
    }

    pub fn kernel_power(dim: usize, beta: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta = {beta} must be > 0"
            )));
        }
        Ok(SpaceSpec {
            dim,
            kind: SpaceKind::KernelPower { beta },
        })
    }

    pub fn dirichlet() -> Self {
        SpaceSpec {
            dim: 1,
            kind: SpaceKind::Dirichlet,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        match &self.kind {
            SpaceKind::Besov { s, weight } => match weight {
                RadialWeight::One => format!("B^{s}_1(d={})", self.dim),
                RadialWeight::Standard { a } => format!("B^{s}_(1-|z|^2)^{a}(d={})", self.dim),
                RadialWeight::Tabulated { .. } => format!("B^{s}_tab(d={})", self.dim),
            },
            SpaceKind::KernelPower { beta } if *beta == 1.0 => format!("H2_{}", self.dim),
            SpaceKind::KernelPower { beta } => format!("K^{beta}(d={})", self.dim),
            SpaceKind::Dirichlet => "D".into(),
        }
    }

    /// `‖z^α‖²` in this space.
    pub fn monomial_norm_sq(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: alpha.dim(),
            });
        }
        let n = alpha.degree();
        match &self.kind {
            SpaceKind::Besov { s, weight } => {
                let m = bergman_part(weight, alpha)?;
                Ok(if n == 0 {
                    m
                } else {
                    (n as f64).powf(2.0 * s) * m
                })
            }
            SpaceKind::KernelPower { beta } => {
                let log_alpha: f64 = alpha
                    .exponents()
                    .iter()
                    .map(|&a| ln_gamma(a as f64 + 1.0))
                    .sum();
                let log_poch = ln_gamma(beta + n as f64) - ln_gamma(*beta);
                Ok((log_alpha - log_poch).exp())
            }
            SpaceKind::Dirichlet => Ok(n as f64 + 1.0),
        }
    }

    /// `‖p‖ = sqrt(Σ |c_α|² ‖z^α‖²)`.
    pub fn norm(&self, p: &Polynomial) -> Result<f64> {
        self.check(p)?;
        let mut acc = 0.0;
        for (a, c) in p.terms() {
            acc += c.norm_sqr() * self.monomial_norm_sq(a)?;
        }
        Ok(acc.sqrt())
    }

    /// `⟨p, q⟩`, linear in `p`.
    pub fn inner(&self, p: &Polynomial, q: &Polynomial) -> Result<Complex64> {
        self.check(p)?;
        self.check(q)?;
        let mut acc = Complex64::default();
        for (a, c) in p.terms() {
            let d = q.coeff(a);
            if d != Complex64::default() {
                acc += c * d.conj() * self.monomial_norm_sq(a)?;
            }
        }
        Ok(acc)
    }

    fn check(&self, p: &Polynomial) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    Ok(())
}

/// `‖z^α‖²_{L²_a(w dV)}`.
pub fn bergman_part(weight: &RadialWeight, alpha: &MultiIndex) -> Result<f64> {
    let d = alpha.dim();
    let n = alpha.degree() as usize;
    let radial = weight.moment(2 * n + 2 * d - 1)?;
    Ok(2.0 * d as f64 * sphere_moment(alpha) * radial)
}

/// `‖z^α‖²` in the integer-order space `B^N_w` normed by
/// `‖w‖_{L¹}|f(0)|² + ∫ |R^N f|² w dV`.
pub fn monomial_norm_sq_derivative_mode(
    weight: &RadialWeight,
    order: u32,
    alpha: &MultiIndex,
) -> Result<f64> {
    let n = alpha.degree();
    if n == 0 {
        weight.l1_norm(alpha.dim())
    } else {
        Ok((n as f64).powi(2 * order as i32) * bergman_part(weight, alpha)?)
    }
}

pub fn monomial_norm_sq(space: &SpaceSpec, alpha: &MultiIndex) -> Result<f64> {
    space.monomial_norm_sq(alpha)
}

pub fn space_norm(space: &SpaceSpec, p: &Polynomial) -> Result<f64> {
    space.norm(p)
}

/// Drury-Arveson `‖z^α‖² = α!/|α|!`, exactly.
pub fn monomial_norm_da(alpha: &MultiIndex) -> BigRational {
    let fact = |k: u32| (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j));
    let num = alpha
        .exponents()
        .iter()
        .fold(BigInt::one(), |acc, &a| acc * fact(a));
    BigRational::new(num, fact(alpha.degree()))
}

/// Min and max over `1 <= |α| <= max_degree` of
/// `‖z^α‖²_{B^s_{w_a}} / ‖z^α‖²_{B^{s-a/2}_1}`.
pub fn besov_shift_ratio(s: f64, a: f64, dim: usize, max_degree: u32) -> Result<(f64, f64)> {
    if max_degree < 1 {
        return Err(Error::InvalidParameter("max_degree must be >= 1".into()));
    }
    let weighted = SpaceSpec::besov(dim, s, RadialWeight::standard(a)?)?;
    let shifted = SpaceSpec::besov(dim, s - a / 2.0, RadialWeight::One)?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for n in 1..=max_degree {
        for alpha in crate::polyring::monomials_of_degree(dim, n) {
            let r = weighted.monomial_norm_sq(&alpha)? / shifted.monomial_norm_sq(&alpha)?;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Ok((lo, hi))
}

/// Memoized monomial norms of one space.
#[derive(Debug)]
pub struct MonomialNormTable {
    space: SpaceSpec,
    values: RwLock<HashMap<MultiIndex, f64>>,
}

impl MonomialNormTable {
    pub fn new(space: SpaceSpec) -> Self {
        MonomialNormTable {
            space,
            values: RwLock::new(HashMap::new()),
        }
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn norm_sq(&self, alpha: &MultiIndex) -> Result<f64> {
        if let Some(v) = self.values.read().expect("poisoned").get(alpha) {
            return Ok(*v);
        }
        let v = self.space.monomial_norm_sq(alpha)?;
        self.values
            .write()
            .expect("poisoned")
            .insert(alpha.clone(), v);
        Ok(v)
    }

    pub fn max_cached_degree(&self) -> Option<u32> {
        self.values
            .read()
            .expect("poisoned")
            .keys()
            .map(|a| a.degree())
            .max()
    }
}

/// JSON form of a space:
/// `{"dim": 2, "s": 1.0, "weight": {"kind": "standard", "a": 1.0}}`,
/// `{"dim": 2, "kind": "drury_arveson"}`, `{"dim": 2, "kind": "power", "beta": 3}`
/// or `{"dim": 1, "kind": "dirichlet"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<f64>>,
}

impl TryFrom<WeightConfig> for RadialWeight {
    type Error = Error;

    fn try_from(w: WeightConfig) -> Result<Self> {
        match w.kind.as_str() {
            "one" => Ok(RadialWeight::One),
            "standard" => RadialWeight::standard(
                w.a.ok_or_else(|| Error::InvalidParameter("standard weight needs `a`".into()))?,
            ),
            "tabulated" => RadialWeight::tabulated(w.moments.ok_or_else(|| {
                Error::InvalidParameter("tabulated weight needs `moments`".into())
            })?),
            other => Err(Error::InvalidParameter(format!(
                "unknown weight kind `{other}`"
            ))),
        }
    }
}

impl From<RadialWeight> for WeightConfig {
    fn from(w: RadialWeight) -> Self {
        match w {
            RadialWeight::One => WeightConfig {
                kind: "one".into(),
                a: None,
                moments: None,
            },
            RadialWeight::Standard { a } => WeightConfig {
                kind: "standard".into(),
                a: Some(a),
                moments: None,
            },
            RadialWeight::Tabulated { moments } => WeightConfig {
                kind: "tabulated".into(),
                a: None,
                moments: Some(moments),
            },
        }
    }
}

impl TryFrom<SpaceConfig> for SpaceSpec {
    type Error = Error;

    fn try_from(c: SpaceConfig) -> Result<Self> {
        match c.kind.as_deref().unwrap_or("besov") {
            "besov" => {
                let weight = match c.weight {
                    Some(w) => RadialWeight::try_from(w)?,
                    None => RadialWeight::One,
                };
                SpaceSpec::besov(c.dim, c.s.unwrap_or(0.0), weight)
            }
            "drury_arveson" => SpaceSpec::drury_arveson(c.dim),
            "power" => SpaceSpec::kernel_power(
                c.dim,
                c.beta
                    .ok_or_else(|| Error::InvalidParameter("power space needs `beta`".into()))?,
            ),
            "dirichlet" => {
                if c.dim != 1 {
                    return Err(Error::InvalidParameter(
                        "the Dirichlet space is defined for dim = 1".into(),
                    ));
                }
                Ok(SpaceSpec::dirichlet())
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown space kind `{other}`"
            ))),
        }
    }
}

impl From<SpaceSpec> for SpaceConfig {
    fn from(s: SpaceSpec) -> Self {
        let mut c = SpaceConfig {
            dim: s.dim,
            kind: None,
            s: None,
            weight: None,
            beta: None,
        };
        match s.kind {
            SpaceKind::Besov { s, weight } => {
                c.s = Some(s);
                c.weight = Some(weight.into());
            }
            SpaceKind::KernelPower { beta: 1.0 } => c.kind = Some("drury_arveson".into()),
            SpaceKind::KernelPower { beta } => {
                c.kind = Some("power".into());
                c.beta = Some(beta);
            }
            SpaceKind::Dirichlet => c.kind = Some("dirichlet".into()),
        }
        c
    }
}
