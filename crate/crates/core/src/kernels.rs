//! Reproducing kernels on the unit ball, Gram matrices, and the positivity
//! certificates built on them: complete-Pick `u`-Grams, contractive
//! multiplier Grams, and the Schur-product descent along the `B^s_1` scale.
//!
//! Positivity checks on finite point sets are one-sided. A Gram that is
//! positive semidefinite on every sampled set is evidence only; a negative
//! eigenvalue is a proof of failure.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianMatrix};
use crate::polyring::{monomials_up_to, Polynomial};
use crate::spaces::SpaceSpec;

/// Relative psd tolerance: `min_eig >= -PSD_REL_TOL * ‖M‖`.
pub const PSD_REL_TOL: f64 = 1e-10;

/// Radius of the ball random point sets are drawn from.
pub const DEFAULT_RADIUS: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `1 / (1 - ⟨z,w⟩)`.
    DruryArveson { dim: usize },
    /// `1 / (1 - z w̄)` on the disc.
    Szego,
    /// `(1 / w̄z) log(1 / (1 - w̄z))` on the disc.
    Dirichlet,
    /// `(1 - ⟨z,w⟩)^{-β}`.
    Power { dim: usize, beta: f64 },
    /// `Σ_{|α| <= D} z^α w̄^α / ‖z^α‖²`.
    FromSpace { space: SpaceSpec, degree: u32 },
}

impl KernelSpec {
    pub fn dim(&self) -> usize {
        match self {
            KernelSpec::DruryArveson { dim } | KernelSpec::Power { dim, .. } => *dim,
            KernelSpec::Szego | KernelSpec::Dirichlet => 1,
            KernelSpec::FromSpace { space, .. } => space.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::DruryArveson { dim } if *dim == 0 => {
                Err(Error::DimensionTooSmall { min: 1, found: 0 })
            }
            KernelSpec::Power { dim, beta } => {
                if *dim == 0 {
                    Err(Error::DimensionTooSmall { min: 1, found: 0 })
                } else if !(*beta > 0.0) {
                    Err(Error::InvalidParameter(format!(
                        "beta = {beta} must be > 0"
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            KernelSpec::DruryArveson { dim } => format!("drury_arveson(d={dim})"),
            KernelSpec::Szego => "szego".into(),
            KernelSpec::Dirichlet => "dirichlet".into(),
            KernelSpec::Power { dim, beta } => format!("power(d={dim},beta={beta})"),
            KernelSpec::FromSpace { space, degree } => {
                format!("from_space({},D={degree})", space.label())
            }
        }
    }

    /// Evaluate without ball checks; callers guarantee `|z|, |w| < 1`.
    pub(crate) fn eval_unchecked(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            KernelSpec::DruryArveson { .. } | KernelSpec::Szego => one / (one - inner(z, w)),
            KernelSpec::Power { beta, .. } => (one - inner(z, w)).powf(-beta),
            KernelSpec::Dirichlet => dirichlet_profile(inner(z, w)),
            KernelSpec::FromSpace { space, degree } => {
                let mut acc = Complex64::default();
                for alpha in monomials_up_to(space.dim(), *degree) {
                    let m = space
                        .monomial_norm_sq(&alpha)
                        .expect("dimension checked by caller");
                    let mut zm = one;
                    let mut wm = one;
                    for (k, &e) in alpha.exponents().iter().enumerate() {
                        zm *= z[k].powu(e);
                        wm *= w[k].powu(e);
                    }
                    acc += zm * wm.conj() / m;
                }
                acc
            }
        }
    }
}

/// `⟨z, w⟩ = Σ z_i w̄_i`.
pub fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `(1/x) log(1/(1-x))`, with the series `Σ x^n/(n+1)` near `x = 0`.
fn dirichlet_profile(x: Complex64) -> Complex64 {
    if x.norm() < 1e-3 {
        let mut acc = Complex64::default();
        let mut p = Complex64::new(1.0, 0.0);
        for n in 0..10 {
            acc += p / (n as f64 + 1.0);
            p *= x;
        }
        acc
    } else {
        -(Complex64::new(1.0, 0.0) - x).ln() / x
    }
}

fn check_point(z: &[Complex64], dim: usize, index: usize) -> Result<()> {
    if z.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: z.len(),
        });
    }
    let r = norm(z);
    if !(r < 1.0) {
        return Err(Error::OutsideBall { index, norm: r });
    }
    Ok(())
}

pub fn kernel_eval(k: &KernelSpec, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    k.validate()?;
    check_point(z, k.dim(), 0)?;
    check_point(w, k.dim(), 1)?;
    Ok(k.eval_unchecked(z, w))
}

/// Finite set of distinct points in the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        for (i, p) in points.iter().enumerate() {
            check_point(p, dim, i)?;
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::InvalidParameter(format!(
                        "points {j} and {i} coincide"
                    )));
                }
            }
        }
        Ok(PointSet {
            dim,
            points,
            seed: None,
        })
    }

    /// `count` points uniform w.r.t. volume in the ball of the given radius.
    pub fn random(dim: usize, count: usize, radius: f64, seed: u64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "radius {radius} must lie in (0, 1)"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count)
            .map(|_| random_ball_point(&mut rng, dim, radius))
            .collect();
        let mut set = PointSet::new(dim, points)?;
        set.seed = Some(seed);
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// This set with `z` appended (if not already present).
    pub fn with_point(&self, z: Vec<Complex64>) -> Result<PointSet> {
        let mut pts = self.points.clone();
        if !pts.contains(&z) {
            pts.push(z);
        }
        PointSet::new(self.dim, pts)
    }
}

/// Uniform point in the ball `|z| < radius` of `C^dim` (real dimension `2 dim`).
pub fn random_ball_point<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<Complex64> {
    let g: Vec<f64> = (0..2 * dim).map(|_| rng.sample(StandardNormal)).collect();
    let len = g
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / (2 * dim) as f64);
    (0..dim)
        .map(|i| Complex64::new(g[2 * i], g[2 * i + 1]) * (r / len))
        .collect()
}

fn hermitian_from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> HermitianMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = f(i, j);
            if i == j {
                m[(i, i)] = Complex64::new(v.re, 0.0);
            } else {
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
    }
    HermitianMatrix::new(m).expect("constructed Hermitian")
}

fn check_dims(k: &KernelSpec, pts: &PointSet) -> Result<()> {
    k.validate()?;
    if k.dim() != pts.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: pts.dim(),
        });
    }
    Ok(())
}

/// `G_ij = k(z_i, z_j)`.
pub fn gram(k: &KernelSpec, pts: &PointSet) -> Result<HermitianMatrix> {
    check_dims(k, pts)?;
    let p = pts.points();
    Ok(hermitian_from_fn(p.len(), |i, j| {
        k.eval_unchecked(&p[i], &p[j])
    }))
}

/// Gram of `u = 1 - 1/k̃` where `k̃` is `k` normalized at `z0`.
pub fn complete_pick_gram(
    k: &KernelSpec,
    pts: &PointSet,
    z0: &[Complex64],
) -> Result<HermitianMatrix> {
    check_dims(k, pts)?;
    check_point(z0, k.dim(), pts.len())?;
    let p = pts.points();
    let k00 = k.eval_unchecked(z0, z0);
    if k00.norm() == 0.0 {
        return Err(Error::VanishingNormalizer { index: pts.len() });
    }
    let kz0: Vec<Complex64> = p.iter().map(|z| k.eval_unchecked(z, z0)).collect();
    if let Some(i) = kz0.iter().position(|v| v.norm() == 0.0) {
        return Err(Error::VanishingNormalizer { index: i });
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(hermitian_from_fn(p.len(), |i, j| {
        let normalized = k.eval_unchecked(&p[i], &p[j]) * k00 / (kz0[i] * kz0[j].conj());
        one - one / normalized
    }))
}

/// `M_ij = k_dst(z_i, z_j) - φ(z_i) conj(φ(z_j)) k_src(z_i, z_j)`.
pub fn contractive_mult_gram(
    k_src: &KernelSpec,
    k_dst: &KernelSpec,
    phi: &Polynomial,
    pts: &PointSet,
) -> Result<HermitianMatrix> {
    check_dims(k_src, pts)?;
    check_dims(k_dst, pts)?;
    if phi.dim() != pts.dim() {
        return Err(Error::DimensionMismatch {
            expected: pts.dim(),
            found: phi.dim(),
        });
    }
    let p = pts.points();
    let vals: Vec<Complex64> = p.iter().map(|z| phi.eval_unchecked(z)).collect();
    Ok(hermitian_from_fn(p.len(), |i, j| {
        k_dst.eval_unchecked(&p[i], &p[j])
            - vals[i] * vals[j].conj() * k_src.eval_unchecked(&p[i], &p[j])
    }))
}

/// Kernel of `B^s_1` up to norm equivalence: `(1 - ⟨z,w⟩)^{-(d+1-2s)}`,
/// valid for `s < (d+1)/2`.
pub fn besov_scale_kernel(dim: usize, s: f64) -> Result<KernelSpec> {
    let beta = dim as f64 + 1.0 - 2.0 * s;
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "s = {s} must be < (d+1)/2 = {}",
            (dim as f64 + 1.0) / 2.0
        )));
    }
    Ok(KernelSpec::Power { dim, beta })
}

/// Minimum eigenvalues of the contractive-multiplier Gram at level
/// `(s, t)` and at the descended level `(s-1, t-1)`.
pub fn inclusion_descent_check(
    phi: &Polynomial,
    dim: usize,
    s: f64,
    t: f64,
    pts: &PointSet,
) -> Result<(f64, f64)> {
    let level_src = besov_scale_kernel(dim, s)?;
    let level_dst = besov_scale_kernel(dim, t)?;
    let down_src = besov_scale_kernel(dim, s - 1.0)?;
    let down_dst = besov_scale_kernel(dim, t - 1.0)?;
    let level = contractive_mult_gram(&level_src, &level_dst, phi, pts)?.min_eigenvalue();
    let descended = contractive_mult_gram(&down_src, &down_dst, phi, pts)?.min_eigenvalue();
    Ok((level, descended))
}

/// Largest `c` (to bisection accuracy) such that the level Gram of `c φ`
/// has min eigenvalue `>= 0`.
pub fn level_psd_scale(
    phi: &Polynomial,
    dim: usize,
    s: f64,
    t: f64,
    pts: &PointSet,
) -> Result<f64> {
    let src = besov_scale_kernel(dim, s)?;
    let dst = besov_scale_kernel(dim, t)?;
    let ok = |c: f64| -> Result<bool> {
        Ok(contractive_mult_gram(&src, &dst, &phi.scale_real(c), pts)?.min_eigenvalue() >= 0.0)
    };
    let mut hi = 1.0;
    while ok(hi)? {
        hi *= 2.0;
        if hi > 1e12 {
            return Ok(hi);
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "psd-evidence")]
    PsdEvidence,
    #[serde(rename = "REFUTED")]
    Refuted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PickCertificate {
    pub kernel: String,
    pub points: PointSet,
    pub min_eig: f64,
    pub verdict: Verdict,
    pub sets_tried: usize,
}

/// Check the `u`-Gram of `k` normalized at `z0` on `pts`.
pub fn pick_certificate(
    k: &KernelSpec,
    pts: &PointSet,
    z0: &[Complex64],
) -> Result<PickCertificate> {
    let u = complete_pick_gram(k, pts, z0)?;
    let min_eig = u.min_eigenvalue();
    let scale = u.spectral_norm().max(1.0);
    let verdict = if min_eig >= -PSD_REL_TOL * scale {
        Verdict::PsdEvidence
    } else {
        Verdict::Refuted
    };
    Ok(PickCertificate {
        kernel: k.label(),
        points: pts.clone(),
        min_eig,
        verdict,
        sets_tried: 1,
    })
}

/// Random search for a point set on which the normalized `u`-Gram has an
/// eigenvalue below `-threshold`. Set sizes cycle through `2..=max_points`.
/// Returns the refuting certificate, or the best (most negative) evidence
/// certificate once `budget` sets have been tried.
pub fn search_pick_refutation(
    k: &KernelSpec,
    z0: &[Complex64],
    budget: usize,
    max_points: usize,
    threshold: f64,
    seed: u64,
) -> Result<PickCertificate> {
    k.validate()?;
    let dim = k.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<PickCertificate> = None;
    let max_points = max_points.max(2);
    for trial in 0..budget.max(1) {
        let n = 2 + trial % (max_points - 1);
        let pts: Vec<Vec<Complex64>> = (0..n)
            .map(|_| random_ball_point(&mut rng, dim, DEFAULT_RADIUS))
            .collect();
        let Ok(pts) = PointSet::new(dim, pts) else {
            continue;
        };
        let u = complete_pick_gram(k, &pts, z0)?;
        let min_eig = u.min_eigenvalue();
        if best.as_ref().is_none_or(|b| min_eig < b.min_eig) {
            best = Some(PickCertificate {
                kernel: k.label(),
                points: pts,
                min_eig,
                verdict: Verdict::PsdEvidence,
                sets_tried: trial + 1,
            });
        }
        if min_eig < -threshold {
            let mut cert = best.expect("just set");
            cert.verdict = Verdict::Refuted;
            return Ok(cert);
        }
    }
    let mut cert = best.expect("budget >= 1");
    cert.sets_tried = budget.max(1);
    Ok(cert)
}
