//! Brute-force cross-checks that share no formulas with `spaces` or
//! `multops`: Monte-Carlo integrals over the ball and sphere, radial
//! Gauss-Legendre quadrature, and multiplication matrices built from raw
//! inner products.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::random_ball_point;
use crate::linalg::CMatrix;
use crate::polyring::{monomials_up_to, MultiIndex, Polynomial};
use crate::spaces::{bergman_part, RadialWeight, SpaceSpec};

/// Smallest sample count used for acceptance-grade estimates.
pub const MIN_ACCEPTANCE_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereScheme {
    /// Normalized standard Gaussian vectors in `R^{2d}`.
    GaussianNormalize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub radial_nodes: usize,
    pub batches: usize,
    pub sphere_scheme: SphereScheme,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            n_samples: 100_000,
            seed: 0,
            radial_nodes: 64,
            batches: 50,
            sphere_scheme: SphereScheme::GaussianNormalize,
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 || self.batches < 2 || self.n_samples < self.batches {
            return Err(Error::InvalidParameter(format!(
                "need n_samples >= batches >= 2, got {} and {}",
                self.n_samples, self.batches
            )));
        }
        Ok(())
    }
}

/// Mean with a batch-means standard error (real and imaginary parts
/// combined in quadrature).
fn batch_means(cfg: &QuadratureConfig, mut sample: impl FnMut() -> Complex64) -> (Complex64, f64) {
    let per = cfg.n_samples / cfg.batches;
    let means: Vec<Complex64> = (0..cfg.batches)
        .map(|_| (0..per).map(|_| sample()).sum::<Complex64>() / per as f64)
        .collect();
    let b = means.len() as f64;
    let mean = means.iter().sum::<Complex64>() / b;
    let var = means.iter().map(|m| (m - mean).norm_sqr()).sum::<f64>() / (b - 1.0);
    (mean, (var / b).sqrt())
}

fn eval_point(p: &Polynomial, z: &[Complex64]) -> Complex64 {
    p.evaluate(z).expect("dimension checked")
}

fn check_pair(p: &Polynomial, q: &Polynomial) -> Result<usize> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(p.dim())
}

/// Monte-Carlo estimate of `∫ p q̄ w dV` over the ball, `V(ball) = 1`.
pub fn mc_inner_product(
    weight: &RadialWeight,
    p: &Polynomial,
    q: &Polynomial,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64)> {
    cfg.validate()?;
    let dim = check_pair(p, q)?;
    weight.density(0.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(batch_means(cfg, || {
        let z = random_ball_point(&mut rng, dim, 1.0);
        let r = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let w = weight.density(r).expect("density checked");
        eval_point(p, &z) * eval_point(q, &z).conj() * w
    }))
}

fn sphere_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    use rand::Rng;
    let g: Vec<f64> = (0..2 * dim).map(|_| rng.sample(StandardNormal)).collect();
    let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    (0..dim)
        .map(|i| Complex64::new(g[2 * i], g[2 * i + 1]) / len)
        .collect()
}

/// Monte-Carlo estimate of `∫_S |ζ^α|² dσ`.
pub fn mc_sphere_moment(alpha: &MultiIndex, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (m, se) = batch_means(cfg, || {
        let z = sphere_point(&mut rng, alpha.dim());
        let v: f64 = z
            .iter()
            .zip(alpha.exponents())
            .map(|(c, &e)| c.norm_sqr().powi(e as i32))
            .product();
        Complex64::new(v, 0.0)
    });
    Ok((m.re, se))
}

/// `(d-1)! α! / (d-1+|α|)!` by direct products.
pub fn sphere_factor(alpha: &MultiIndex) -> f64 {
    let d = alpha.dim() as u64;
    let fact = |k: u64| (1..=k).map(|i| i as f64).product::<f64>();
    let num: f64 = alpha.exponents().iter().map(|&a| fact(a as u64)).product();
    // (d-1)!/(d-1+n)! = 1 / ((d)(d+1)...(d-1+n))
    let den: f64 = (d..d + alpha.degree() as u64).map(|i| i as f64).product();
    num / den
}

/// `‖z^α‖²_{L²_a(w dV)}` via polar coordinates: `2d · sphere factor ·
/// ∫_0^1 r^{2|α|+2d-1} w(r) dr`, the radial integral by Gauss-Legendre.
pub fn quad_monomial_norm(
    weight: &RadialWeight,
    alpha: &MultiIndex,
    radial_nodes: usize,
) -> Result<f64> {
    let nodes = NonZeroUsize::new(radial_nodes)
        .ok_or_else(|| Error::InvalidParameter("radial_nodes must be positive".into()))?;
    weight.density(0.0)?;
    let d = alpha.dim();
    let k = (2 * alpha.degree() as usize + 2 * d - 1) as i32;
    let rule = GaussLegendre::new(nodes);
    let radial = rule.integrate(0.0, 1.0, |r| {
        r.powi(k) * weight.density(r).expect("density checked")
    });
    Ok(2.0 * d as f64 * sphere_factor(alpha) * radial)
}

/// `M_φ: P_D -> P_{D + deg φ}` in one space, entry `(α, β)` equal to
/// `⟨φ z^β, z^α⟩ / (‖z^α‖ ‖z^β‖)` from polynomial products and the
/// space's inner product. Rows and columns in graded order.
pub fn mult_matrix_raw(space: &SpaceSpec, phi: &Polynomial, degree: u32) -> Result<CMatrix> {
    if phi.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: phi.dim(),
        });
    }
    let dim = space.dim();
    let one = Complex64::new(1.0, 0.0);
    let rows = monomials_up_to(dim, degree + phi.degree().max(0) as u32);
    let cols = monomials_up_to(dim, degree);
    let row_polys: Vec<Polynomial> = rows
        .iter()
        .map(|a| Polynomial::monomial(a.clone(), one))
        .collect();
    let row_norms = row_polys
        .iter()
        .map(|p| space.norm(p))
        .collect::<Result<Vec<_>>>()?;
    let mut m = CMatrix::zeros(rows.len(), cols.len());
    for (j, beta) in cols.iter().enumerate() {
        let zb = Polynomial::monomial(beta.clone(), one);
        let nb = space.norm(&zb)?;
        let prod = phi.checked_mul(&zb)?;
        for (i, za) in row_polys.iter().enumerate() {
            m[(i, j)] = space.inner(&prod, za)? / (row_norms[i] * nb);
        }
    }
    Ok(m)
}

/// `max |a_ij - b_ij|`; infinite when the shapes differ.
pub fn max_entry_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleRecord {
    pub check: String,
    pub estimate: f64,
    pub stderr: f64,
    pub reference: f64,
    pub z_score: f64,
}

impl OracleRecord {
    /// The error is floored at round-off so exact estimates (zero sample
    /// variance) do not produce infinite scores.
    fn new(check: String, estimate: f64, stderr: f64, reference: f64) -> Self {
        let floor = 1e-12 * reference.abs().max(1.0);
        let z_score = (estimate - reference).abs() / stderr.max(floor);
        OracleRecord {
            check,
            estimate,
            stderr,
            reference,
            z_score,
        }
    }
}

/// Monte-Carlo checks for every monomial of degree `<= max_degree`: its
/// weighted norm against the closed form, and its orthogonality to the next
/// monomial in graded order. Each check uses its own seed `cfg.seed + i`.
pub fn cross_validate(
    dim: usize,
    weight: &RadialWeight,
    max_degree: u32,
    cfg: &QuadratureConfig,
) -> Result<Vec<OracleRecord>> {
    let one = Complex64::new(1.0, 0.0);
    let monos = monomials_up_to(dim, max_degree);
    let mut out = Vec::new();
    let mut seed = cfg.seed;
    let mut next_cfg = || {
        let c = QuadratureConfig {
            seed,
            ..cfg.clone()
        };
        seed = seed.wrapping_add(1);
        c
    };
    for (i, a) in monos.iter().enumerate() {
        let p = Polynomial::monomial(a.clone(), one);
        let (est, se) = mc_inner_product(weight, &p, &p, &next_cfg())?;
        out.push(OracleRecord::new(
            format!("norm{:?}", a.exponents()),
            est.re,
            se,
            bergman_part(weight, a)?,
        ));
        if let Some(b) = monos.get(i + 1) {
            let q = Polynomial::monomial(b.clone(), one);
            let (est, se) = mc_inner_product(weight, &p, &q, &next_cfg())?;
            out.push(OracleRecord::new(
                format!("orth{:?}{:?}", a.exponents(), b.exponents()),
                est.norm(),
                se,
                0.0,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multops::mult_matrix;
    use crate::polyring::parse_polynomial;

    fn cfg(n: usize, seed: u64) -> QuadratureConfig {
        QuadratureConfig {
            n_samples: n,
            seed,
            ..QuadratureConfig::default()
        }
    }

    #[test]
    fn mc_examples() {
        let one = Polynomial::one(2);
        let (e, se) = mc_inner_product(&RadialWeight::One, &one, &one, &cfg(20_000, 1)).unwrap();
        assert!((e.re - 1.0).abs() < 1e-12 && se < 1e-12);

        let z1 = parse_polynomial("z1", 2).unwrap();
        let z2 = parse_polynomial("z2", 2).unwrap();
        let (e, se) = mc_inner_product(&RadialWeight::One, &z1, &z2, &cfg(20_000, 2)).unwrap();
        assert!(e.norm() <= 3.0 * se, "{e} {se}");

        let (e, se) = mc_inner_product(&RadialWeight::One, &z1, &z1, &cfg(20_000, 3)).unwrap();
        let reference =
            bergman_part(&RadialWeight::One, &MultiIndex::new(vec![1, 0]).unwrap()).unwrap();
        assert!((e.re - reference).abs() <= 3.0 * se, "{e} {se} {reference}");
    }

    #[test]
    fn tabulated_weight_is_not_sampled() {
        let w = RadialWeight::tabulated(vec![0.5; 8]).unwrap();
        let one = Polynomial::one(1);
        assert!(matches!(
            mc_inner_product(&w, &one, &one, &cfg(2000, 0)),
            Err(Error::NonEvaluableWeight(_))
        ));
        assert!(quad_monomial_norm(&w, &MultiIndex::zero(1), 16).is_err());
    }

    #[test]
    fn sphere_factor_matches_sampling() {
        for e in [vec![0, 0], vec![1, 0], vec![2, 1], vec![1, 1, 1]] {
            let a = MultiIndex::new(e).unwrap();
            let (m, se) = mc_sphere_moment(&a, &cfg(50_000, 7)).unwrap();
            assert!(
                (m - sphere_factor(&a)).abs() <= 4.0 * se.max(1e-15),
                "{a:?}"
            );
        }
    }

    #[test]
    fn quadrature_examples() {
        let zero = MultiIndex::zero(2);
        assert!((quad_monomial_norm(&RadialWeight::One, &zero, 32).unwrap() - 1.0).abs() < 1e-12);
        let a = MultiIndex::new(vec![1, 0]).unwrap();
        // d! α! / (d+|α|)! = 2/6
        assert!((quad_monomial_norm(&RadialWeight::One, &a, 32).unwrap() - 1.0 / 3.0).abs() < 1e-6);
        let w = RadialWeight::standard(1.0).unwrap();
        for e in [vec![0, 0], vec![2, 1], vec![4, 0]] {
            let a = MultiIndex::new(e).unwrap();
            let q = quad_monomial_norm(&w, &a, 32).unwrap();
            let c = bergman_part(&w, &a).unwrap();
            assert!((q - c).abs() < 1e-6 * c);
        }
    }

    #[test]
    fn raw_matrix_examples() {
        let da = SpaceSpec::drury_arveson(2).unwrap();
        let m = mult_matrix_raw(&da, &Polynomial::one(2), 3).unwrap();
        assert_eq!(m.nrows(), m.ncols());
        assert!((m.clone() - CMatrix::identity(10, 10)).norm() < 1e-14);

        let z1 = parse_polynomial("z1", 2).unwrap();
        let raw = mult_matrix_raw(&da, &z1, 4).unwrap();
        let fast = mult_matrix(&da, &da, &z1, 4).unwrap().to_dense();
        assert_eq!(raw.shape(), fast.shape());
        assert!(max_entry_deviation(&raw, &fast) <= 1e-12);
    }

    #[test]
    fn cross_validation_z_scores() {
        let recs = cross_validate(
            2,
            &RadialWeight::standard(1.0).unwrap(),
            2,
            &cfg(20_000, 11),
        )
        .unwrap();
        assert_eq!(recs.len(), 6 + 5);
        for r in &recs {
            assert!(r.z_score <= 4.0, "{r:?}");
        }
    }
}
