//! Weak-product norm bounds: explicit factorizations give upper bounds,
//! Hankel forms at matched truncation give lower bounds.

mod hankel;
mod smirnov;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{PolyRecord, Polynomial};
use crate::spaces::SpaceSpec;

pub use hankel::{
    duality_check, hankel_build, hankel_intertwine_check, hankel_norm_lower, wp_norm_lower_matched,
    HankelForm,
};
pub use smirnov::{smirnov_verify, SmirnovRecord, SmirnovWitness, DEFAULT_R_SEQUENCE};

/// Agreement required of `‖f‖` and `‖g‖` before a square split.
pub const BALANCE_TOL: f64 = 1e-10;

/// `h = Σ f_i g_i` as an explicit finite list of pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FactorizationRecord", into = "FactorizationRecord")]
pub struct Factorization {
    dim: usize,
    pairs: Vec<(Polynomial, Polynomial)>,
}

impl Factorization {
    pub fn new(dim: usize, pairs: Vec<(Polynomial, Polynomial)>) -> Result<Self> {
        for (f, g) in &pairs {
            for p in [f, g] {
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: p.dim(),
                    });
                }
            }
        }
        Ok(Factorization { dim, pairs })
    }

    pub fn single(f: Polynomial, g: Polynomial) -> Result<Self> {
        Factorization::new(f.dim(), vec![(f, g)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(Polynomial, Polynomial)] {
        &self.pairs
    }

    /// Largest degree among all factors (0 for the empty list).
    pub fn max_factor_degree(&self) -> u32 {
        self.pairs
            .iter()
            .flat_map(|(f, g)| [f.degree(), g.degree()])
            .max()
            .unwrap_or(0)
            .max(0) as u32
    }

    /// The represented function `Σ f_i g_i`.
    pub fn product(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.dim);
        for (f, g) in &self.pairs {
            acc = acc
                .checked_add(&f.checked_mul(g).expect("dims agree"))
                .expect("dims agree");
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct FactorizationRecord {
    dim: usize,
    pairs: Vec<(Vec<PolyRecord>, Vec<PolyRecord>)>,
}

impl TryFrom<FactorizationRecord> for Factorization {
    type Error = Error;

    fn try_from(r: FactorizationRecord) -> Result<Self> {
        let pairs = r
            .pairs
            .iter()
            .map(|(f, g)| {
                Ok((
                    Polynomial::from_records(r.dim, f)?,
                    Polynomial::from_records(r.dim, g)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Factorization::new(r.dim, pairs)
    }
}

impl From<Factorization> for FactorizationRecord {
    fn from(f: Factorization) -> Self {
        FactorizationRecord {
            dim: f.dim,
            pairs: f
                .pairs
                .iter()
                .map(|(a, b)| (a.to_records(), b.to_records()))
                .collect(),
        }
    }
}

/// `Σ ‖f_i‖ ‖g_i‖`, an upper bound for `‖Σ f_i g_i‖_{H⊙H}`.
pub fn wp_norm_upper(space: &SpaceSpec, fact: &Factorization) -> Result<f64> {
    fact.pairs
        .iter()
        .map(|(f, g)| Ok(space.norm(f)? * space.norm(g)?))
        .sum()
}

/// `(f·√(‖g‖/‖f‖), g·√(‖f‖/‖g‖))`: same product, equal norms.
pub fn rescale_to_equal_norm(
    f: &Polynomial,
    g: &Polynomial,
    space: &SpaceSpec,
) -> Result<(Polynomial, Polynomial)> {
    let nf = space.norm(f)?;
    let ng = space.norm(g)?;
    if nf == 0.0 || ng == 0.0 {
        return Err(Error::ZeroInput);
    }
    let t = (ng / nf).sqrt();
    Ok((f.scale_real(t), g.scale_real(1.0 / t)))
}

/// `fg = A² - B²` with `A = (f+g)/2`, `B = (f-g)/2`, returned as the pairs
/// `(A, A)` and `(B, -B)`. For `‖f‖ = ‖g‖` the parallelogram law gives
/// `‖A‖² + ‖B‖² = ‖f‖‖g‖`.
pub fn square_split(f: &Polynomial, g: &Polynomial, space: &SpaceSpec) -> Result<Factorization> {
    let nf = space.norm(f)?;
    let ng = space.norm(g)?;
    if (nf - ng).abs() > BALANCE_TOL * nf.max(ng).max(1.0) {
        return Err(Error::NormMismatch {
            left: nf,
            right: ng,
        });
    }
    let a = f.checked_add(g)?.scale_real(0.5);
    let b = f.checked_sub(g)?.scale_real(0.5);
    let minus_b = b.scale_real(-1.0);
    Factorization::new(f.dim(), vec![(a.clone(), a), (b, minus_b)])
}

/// Square-split every pair after balancing it.
pub fn split_all(space: &SpaceSpec, fact: &Factorization) -> Result<Factorization> {
    let mut pairs = Vec::with_capacity(2 * fact.pairs.len());
    for (f, g) in &fact.pairs {
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let (f, g) = rescale_to_equal_norm(f, g, space)?;
        pairs.extend(square_split(&f, &g, space)?.pairs);
    }
    Factorization::new(fact.dim, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn upper_bound_examples() {
        let da = SpaceSpec::drury_arveson(2).unwrap();
        let h = p("z1^2 + 3 z2");
        let f = Factorization::single(Polynomial::one(2), h.clone()).unwrap();
        let (u, n) = (wp_norm_upper(&da, &f).unwrap(), da.norm(&h).unwrap());
        assert!((u - n).abs() < 1e-14 * n, "{u} {n}");
        let f = Factorization::single(p("z1"), p("z1")).unwrap();
        assert!((wp_norm_upper(&da, &f).unwrap() - 1.0).abs() < 1e-14);
        let f2 = Factorization::single(Polynomial::one(2), p("z1^2")).unwrap();
        assert!((wp_norm_upper(&da, &f2).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(f.product(), f2.product());
        // In H²_2 ‖z1z2‖ < ‖z1‖‖z2‖, so the trivial factorization wins.
        let f3 = Factorization::single(p("z1"), p("z2")).unwrap();
        let f4 = Factorization::single(Polynomial::one(2), p("z1 z2")).unwrap();
        let best = wp_norm_upper(&da, &f3)
            .unwrap()
            .min(wp_norm_upper(&da, &f4).unwrap());
        assert!((best - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn square_split_examples() {
        let da = SpaceSpec::drury_arveson(2).unwrap();
        let f = p("z1");
        let s = square_split(&f, &f, &da).unwrap();
        assert_eq!(s.pairs()[0].0, f);
        assert!(s.pairs()[1].0.is_zero());

        let s = square_split(&p("z1"), &p("z2"), &da).unwrap();
        assert_eq!(s.pairs()[0].0, p("0.5 z1 + 0.5 z2"));
        assert_eq!(s.pairs()[1].0, p("0.5 z1 - 0.5 z2"));
        assert!((wp_norm_upper(&da, &s).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(s.product(), p("z1 z2"));

        let s = square_split(&p("z1"), &p("-z1"), &da).unwrap();
        assert!(s.pairs()[0].0.is_zero());
        assert_eq!(s.pairs()[1].0, p("z1"));

        assert!(matches!(
            square_split(&p("2 z1"), &p("z1"), &da),
            Err(Error::NormMismatch { .. })
        ));
    }

    #[test]
    fn rescale_examples() {
        let da = SpaceSpec::drury_arveson(2).unwrap();
        let (f, g) = rescale_to_equal_norm(&p("2"), &p("1"), &da).unwrap();
        assert!((f.constant_term().re - 2f64.sqrt()).abs() < 1e-15);
        assert!((g.constant_term().re - 2f64.sqrt()).abs() < 1e-15);
        let (f, g) = rescale_to_equal_norm(&p("z1"), &p("z2"), &da).unwrap();
        assert_eq!((f, g), (p("z1"), p("z2")));
        assert!(matches!(
            rescale_to_equal_norm(&p("0"), &p("z1"), &da),
            Err(Error::ZeroInput)
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let f = Polynomial::random(&mut rng, 2, 3);
            let g = Polynomial::random(&mut rng, 2, 3);
            let (a, b) = rescale_to_equal_norm(&f, &g, &da).unwrap();
            let diff = a
                .checked_mul(&b)
                .unwrap()
                .checked_sub(&f.checked_mul(&g).unwrap())
                .unwrap();
            assert!(diff.max_abs_coeff() < 1e-12);
            assert!((da.norm(&a).unwrap() - da.norm(&b).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn factorization_round_trips_through_json() {
        let f = Factorization::new(2, vec![(p("z1 + 2i"), p("z2^3")), (p("1"), p("-z1"))]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: Factorization = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
