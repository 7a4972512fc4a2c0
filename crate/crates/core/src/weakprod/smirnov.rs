//! Checks on a candidate representation `h = φ / (1 - ψ)²` with `ψ(0) = 0`.
//! The witness is an input; only the finite-section consequences of the
//! representation are verified.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::PointSet;
use crate::multops::{column_norm, compressed_mult_matrix, MultiplierTuple};
use crate::polyring::{PolyRecord, Polynomial};
use crate::spaces::SpaceSpec;

pub const DEFAULT_R_SEQUENCE: [f64; 3] = [0.5, 0.9, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WitnessRecord", into = "WitnessRecord")]
pub struct SmirnovWitness {
    pub space: SpaceSpec,
    pub h: Polynomial,
    pub phi: Polynomial,
    pub psi: Polynomial,
    pub z0: Vec<Complex64>,
    pub r_sequence: Vec<f64>,
}

impl SmirnovWitness {
    /// Witness normalized at the origin with the default `r` sequence.
    pub fn at_origin(space: SpaceSpec, h: Polynomial, phi: Polynomial, psi: Polynomial) -> Self {
        let z0 = vec![Complex64::default(); space.dim()];
        SmirnovWitness {
            space,
            h,
            phi,
            psi,
            z0,
            r_sequence: DEFAULT_R_SEQUENCE.to_vec(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessRecord {
    space: SpaceSpec,
    h: Vec<PolyRecord>,
    phi: Vec<PolyRecord>,
    psi: Vec<PolyRecord>,
    #[serde(default)]
    z0: Option<Vec<Complex64>>,
    #[serde(default)]
    r_sequence: Option<Vec<f64>>,
}

impl TryFrom<WitnessRecord> for SmirnovWitness {
    type Error = Error;

    fn try_from(r: WitnessRecord) -> Result<Self> {
        let dim = r.space.dim();
        let mut w = SmirnovWitness::at_origin(
            r.space,
            Polynomial::from_records(dim, &r.h)?,
            Polynomial::from_records(dim, &r.phi)?,
            Polynomial::from_records(dim, &r.psi)?,
        );
        if let Some(z0) = r.z0 {
            w.z0 = z0;
        }
        if let Some(rs) = r.r_sequence {
            w.r_sequence = rs;
        }
        Ok(w)
    }
}

impl From<SmirnovWitness> for WitnessRecord {
    fn from(w: SmirnovWitness) -> Self {
        WitnessRecord {
            h: w.h.to_records(),
            phi: w.phi.to_records(),
            psi: w.psi.to_records(),
            space: w.space,
            z0: Some(w.z0),
            r_sequence: Some(w.r_sequence),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FracBound {
    pub r: f64,
    /// Lower bound for `‖(1-r)ψ / (1-rψ)‖_Mult`; contract `<= 1`.
    pub contraction: f64,
    /// Lower bound for `‖(1-ψ) / (1-rψ)‖_Mult`; contract `<= 2`.
    pub bounded: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmirnovRecord {
    #[serde(rename = "D")]
    pub degree: u32,
    /// Space norm of the degree-`<= D` part of `(1-ψ)² h - φ`.
    pub residual: f64,
    /// `max |(1-ψ)² h - φ|` over the grid.
    pub pointwise_residual: f64,
    /// Truncated lower bound for `‖ψ‖_Mult`.
    pub psi_mult_lower: f64,
    pub frac_bounds: Vec<FracBound>,
}

impl SmirnovRecord {
    /// Largest `(contraction, bounded)` pair over the `r` sequence.
    pub fn max_frac_bounds(&self) -> (f64, f64) {
        self.frac_bounds.iter().fold((0.0, 0.0), |(a, b), f| {
            (f64::max(a, f.contraction), f64::max(b, f.bounded))
        })
    }

    /// Whether some computed lower bound exceeds its contract.
    pub fn refutes(&self, tol: f64) -> bool {
        let (c, b) = self.max_frac_bounds();
        self.psi_mult_lower > 1.0 + tol || c > 1.0 + tol || b > 2.0 + tol
    }
}

pub fn smirnov_verify(w: &SmirnovWitness, degree: u32, grid: &PointSet) -> Result<SmirnovRecord> {
    let dim = w.space.dim();
    for p in [&w.h, &w.phi, &w.psi] {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    let c0 = w.psi.constant_term();
    if c0 != Complex64::default() {
        return Err(Error::NonzeroConstantTerm {
            re: c0.re,
            im: c0.im,
        });
    }
    if w.z0.len() != dim || w.z0.iter().any(|c| *c != Complex64::default()) {
        return Err(Error::InvalidParameter("z0 must be the origin".into()));
    }

    let one = Polynomial::one(dim);
    let one_minus_psi = one.checked_sub(&w.psi)?;
    let defect = one_minus_psi
        .checked_mul(&one_minus_psi)?
        .checked_mul(&w.h)?
        .checked_sub(&w.phi)?;
    let residual = w.space.norm(&defect.truncate(degree))?;
    let mut pointwise_residual = 0.0f64;
    for z in grid.points() {
        pointwise_residual = pointwise_residual.max(defect.evaluate(z)?.norm());
    }

    let psi_mult_lower = column_norm(
        &w.space,
        &w.space,
        &MultiplierTuple::new(dim, vec![w.psi.clone()])?,
        degree,
    )?;

    let mut frac_bounds = Vec::with_capacity(w.r_sequence.len());
    for &r in &w.r_sequence {
        let inv = w.psi.invert_one_minus(r, degree)?;
        let contraction = w
            .psi
            .scale_real(1.0 - r)
            .checked_mul(&inv)?
            .truncate(degree);
        let bounded = one_minus_psi.checked_mul(&inv)?.truncate(degree);
        frac_bounds.push(FracBound {
            r,
            contraction: compressed_mult_matrix(&w.space, &contraction, degree)?.op_norm(),
            bounded: compressed_mult_matrix(&w.space, &bounded, degree)?.op_norm(),
        });
    }

    Ok(SmirnovRecord {
        degree,
        residual,
        pointwise_residual,
        psi_mult_lower,
        frac_bounds,
    })
}
