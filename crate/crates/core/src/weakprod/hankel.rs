//! Truncated Hankel forms `(f, g) ↦ ⟨fg, b⟩` in orthonormal monomial
//! coordinates.

use nalgebra::DVector;
use num_complex::Complex64;

use super::{wp_norm_upper, Factorization};
use crate::error::{Error, Result};
use crate::linalg::{op_norm, CMatrix};
use crate::multops::TruncationBasis;
use crate::polyring::Polynomial;
use crate::spaces::SpaceSpec;

/// `B_{αβ} = ⟨z^α z^β, b⟩ / (‖z^α‖ ‖z^β‖)` over `|α|, |β| <= D`. Then
/// `⟨fg, b⟩ = f̂ᵀ B ĝ` for orthonormal coordinates `f̂`, `ĝ`. `B` is complex
/// symmetric, not Hermitian.
#[derive(Debug, Clone)]
pub struct HankelForm {
    basis: TruncationBasis,
    symbol: Polynomial,
    matrix: CMatrix,
}

impl HankelForm {
    pub fn space(&self) -> &SpaceSpec {
        self.basis.space()
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn symbol(&self) -> &Polynomial {
        &self.symbol
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &TruncationBasis {
        &self.basis
    }

    /// `B(f, g) = ⟨fg, b⟩` for `deg f, deg g <= D`.
    pub fn apply(&self, f: &Polynomial, g: &Polynomial) -> Result<Complex64> {
        let x = self.basis.coords(f)?;
        let y = self.basis.coords(g)?;
        Ok(bilinear(&self.matrix, &x, &y))
    }
}

fn bilinear(m: &CMatrix, x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
    (x.transpose() * m * y)[(0, 0)]
}

pub fn hankel_build(space: &SpaceSpec, b: &Polynomial, degree: u32) -> Result<HankelForm> {
    if b.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: b.dim(),
        });
    }
    let basis = TruncationBasis::new(space, degree)?;
    let n = basis.len();
    let mut matrix = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let gamma = basis.indices()[i].add_unchecked(&basis.indices()[j]);
            let c = b.coeff(&gamma);
            if c == Complex64::default() {
                continue;
            }
            let v = c.conj() * space.monomial_norm_sq(&gamma)?
                / (basis.monomial_norm(i) * basis.monomial_norm(j));
            matrix[(i, j)] = v;
            matrix[(j, i)] = v;
        }
    }
    Ok(HankelForm {
        basis,
        symbol: b.clone(),
        matrix,
    })
}

/// `max |B(φ e_α, e_β) - B(e_α, φ e_β)|` over `|α|, |β| <= D_inner`.
pub fn hankel_intertwine_check(h: &HankelForm, phi: &Polynomial, inner_degree: u32) -> Result<f64> {
    let needed = inner_degree + phi.degree().max(0) as u32;
    if needed > h.degree() {
        return Err(Error::DegreeBudget {
            needed: needed as usize,
            available: h.degree() as usize,
        });
    }
    let inner = TruncationBasis::new(h.space(), inner_degree)?;
    let unit = |i: usize| {
        Polynomial::monomial(
            inner.indices()[i].clone(),
            Complex64::new(1.0 / inner.monomial_norm(i), 0.0),
        )
    };
    let units: Vec<Polynomial> = (0..inner.len()).map(unit).collect();
    let moved = units
        .iter()
        .map(|e| h.basis.coords(&phi.checked_mul(e)?))
        .collect::<Result<Vec<_>>>()?;
    let plain = units
        .iter()
        .map(|e| h.basis.coords(e))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for a in 0..units.len() {
        for b in 0..units.len() {
            let lhs = bilinear(&h.matrix, &moved[a], &plain[b]);
            let rhs = bilinear(&h.matrix, &plain[a], &moved[b]);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Largest singular value of the truncated form: a lower bound for
/// `‖H_b‖`, non-decreasing in `D`.
pub fn hankel_norm_lower(h: &HankelForm) -> f64 {
    op_norm(&h.matrix)
}

/// `wp_norm_upper(F) · ‖B_D‖ - |⟨Σ f_i g_i, b⟩|`. Nonnegative for a single
/// pair, since `|f̂ᵀ B ĝ| <= ‖f‖ ‖g‖ ‖B_D‖`.
pub fn duality_check(
    space: &SpaceSpec,
    fact: &Factorization,
    b: &Polynomial,
    degree: u32,
) -> Result<f64> {
    let needed = fact.max_factor_degree();
    if needed > degree {
        return Err(Error::DegreeBudget {
            needed: needed as usize,
            available: degree as usize,
        });
    }
    let h = hankel_build(space, b, degree)?;
    let pairing = space.inner(&fact.product(), b)?.norm();
    Ok(wp_norm_upper(space, fact)? * hankel_norm_lower(&h) - pairing)
}

/// `|⟨h, b⟩| / ‖B_D‖`: a lower bound for `Σ ‖f_i‖‖g_i‖` over every
/// factorization `h = Σ f_i g_i` whose factors all have degree `<= D`.
/// Returns 0 when the form vanishes.
pub fn wp_norm_lower_matched(
    space: &SpaceSpec,
    h: &Polynomial,
    b: &Polynomial,
    degree: u32,
) -> Result<f64> {
    let form = hankel_build(space, b, degree)?;
    let norm = hankel_norm_lower(&form);
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(space.inner(h, b)?.norm() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, MultiIndex};
    use crate::weakprod::wp_norm_upper;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    fn da() -> SpaceSpec {
        SpaceSpec::drury_arveson(2).unwrap()
    }

    #[test]
    fn build_examples() {
        let h = hankel_build(&da(), &Polynomial::zero(2), 3).unwrap();
        assert!(h.matrix().iter().all(|v| *v == Complex64::default()));
        assert_eq!(hankel_norm_lower(&h), 0.0);

        let h = hankel_build(&da(), &p("z1^2"), 2).unwrap();
        let i = h
            .basis()
            .index_of(&MultiIndex::new(vec![1, 0]).unwrap())
            .unwrap();
        // ‖z1²‖² = 2!/2! = 1 in H²_2.
        assert!((h.matrix()[(i, i)].re - 1.0).abs() < 1e-15);
        let nonzero = h.matrix().iter().filter(|v| v.norm() > 0.0).count();
        // (0, z1²), (z1², 0), (z1, z1).
        assert_eq!(nonzero, 3);

        let h = hankel_build(&da(), &Polynomial::one(2), 3).unwrap();
        assert_eq!(h.matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        assert!((hankel_norm_lower(&h) - 1.0).abs() < 1e-14);
        assert_eq!(h.matrix().iter().filter(|v| v.norm() > 0.0).count(), 1);
    }

    #[test]
    fn form_is_symmetric_and_vanishes_above_symbol_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let b = Polynomial::random(&mut rng, 2, 3);
        let h = hankel_build(&da(), &b, 4).unwrap();
        let m = h.matrix();
        assert_eq!(m, &m.transpose());
        for (i, a) in h.basis().indices().iter().enumerate() {
            for (j, c) in h.basis().indices().iter().enumerate() {
                if a.degree() + c.degree() > 3 {
                    assert_eq!(m[(i, j)], Complex64::default());
                }
            }
        }
    }

    #[test]
    fn apply_is_the_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let b = Polynomial::random(&mut rng, 2, 5);
        let h = hankel_build(&da(), &b, 4).unwrap();
        let f = Polynomial::random(&mut rng, 2, 3);
        let g = Polynomial::random(&mut rng, 2, 2);
        let direct = da().inner(&f.checked_mul(&g).unwrap(), &b).unwrap();
        assert!((h.apply(&f, &g).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn intertwining_examples() {
        let h = hankel_build(&da(), &p("z1^2 z2"), 4).unwrap();
        assert!(hankel_intertwine_check(&h, &p("3 - 2i"), 2).unwrap() < 1e-15);
        assert!(hankel_intertwine_check(&h, &p("z1"), 2).unwrap() <= 1e-13);
        assert!(matches!(
            hankel_intertwine_check(&h, &p("z1 z2"), 3),
            Err(Error::DegreeBudget {
                needed: 5,
                available: 4
            })
        ));
    }

    #[test]
    fn norm_sweep_is_monotone_and_stabilizes() {
        let vals: Vec<f64> = (3..=6)
            .map(|d| hankel_norm_lower(&hankel_build(&da(), &p("z1"), d).unwrap()))
            .collect();
        assert!(vals[0] > 0.0);
        for w in vals.windows(2) {
            assert!(w[1] >= w[0] - 1e-14);
        }
        assert!((vals[3] - vals[0]).abs() < 1e-3 * vals[3]);
    }

    #[test]
    fn duality_examples() {
        let f = Factorization::single(Polynomial::one(2), Polynomial::one(2)).unwrap();
        assert!(
            duality_check(&da(), &f, &Polynomial::zero(2), 2)
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(
            duality_check(&da(), &f, &Polynomial::one(2), 2)
                .unwrap()
                .abs()
                < 1e-14
        );

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = Polynomial::random(&mut rng, 2, 4);
            let g = Polynomial::random(&mut rng, 2, 4);
            let b = Polynomial::random(&mut rng, 2, 8);
            let fact = Factorization::single(f, g).unwrap();
            assert!(duality_check(&da(), &fact, &b, 8).unwrap() >= -1e-10);
        }
        let fact = Factorization::single(p("z1^3"), Polynomial::one(2)).unwrap();
        assert!(matches!(
            duality_check(&da(), &fact, &p("z1"), 2),
            Err(Error::DegreeBudget { .. })
        ));
    }

    #[test]
    fn matched_lower_bound_sits_below_upper_bound() {
        let h = p("z1 z2");
        let up = wp_norm_upper(
            &da(),
            &Factorization::single(Polynomial::one(2), h.clone()).unwrap(),
        )
        .unwrap();
        let lo = wp_norm_lower_matched(&da(), &h, &h, 2).unwrap();
        assert!(lo > 0.0 && lo <= up + 1e-14, "{lo} {up}");
        assert_eq!(
            wp_norm_lower_matched(&da(), &h, &Polynomial::zero(2), 2).unwrap(),
            0.0
        );
    }
}
