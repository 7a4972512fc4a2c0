//! Sparse multivariate polynomials over `C` in `d` variables.
//!
//! Terms are keyed by [`MultiIndex`] and iterated in graded order: total
//! degree first, then reverse-lexicographic on the exponent tuple so that
//! `z1` precedes `z2` and `z1^2` precedes `z1 z2`.

mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use text::{parse_polynomial, PolyRecord};

/// Exponent tuple `alpha = (alpha_1, ..., alpha_d)` of the monomial `z^alpha`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        Ok(MultiIndex(exponents))
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim.max(1)])
    }

    /// Unit index `e_i` (0-based `i`).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when every component stays non-negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `alpha! = prod alpha_i!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial_f64(a)).product()
    }
}

pub(crate) fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All multi-indices of total degree exactly `n` in `dim` variables, in
/// graded order.
pub fn monomials_of_degree(dim: usize, n: u32) -> Vec<MultiIndex> {
    fn rec(dim: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos == dim - 1 {
            cur[pos] = left;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for a in (0..=left).rev() {
            cur[pos] = a;
            rec(dim, pos + 1, left - a, cur, out);
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    let mut cur = vec![0; dim];
    rec(dim, 0, n, &mut cur, &mut out);
    out
}

/// All multi-indices with `|alpha| <= max_degree`, graded order.
pub fn monomials_up_to(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|n| monomials_of_degree(dim, n))
        .collect()
}

/// Polynomial in canonical form: no stored coefficient is exactly zero.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `z_{i+1}` (0-based `i`).
    pub fn coordinate(dim: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, i), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = Self::zero(dim);
        for (alpha, c) in terms {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: alpha.dim(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|a| a.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    /// Accumulate `c z^alpha`, keeping canonical form.
    pub(crate) fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                if c != Complex64::default() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum == Complex64::default() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add_unchecked(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    pub fn scale_real(&self, c: f64) -> Polynomial {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Sum of the terms with `|alpha| = n`.
    pub fn homogeneous_part(&self, n: u32) -> Polynomial {
        self.filter(|a| a.degree() == n)
    }

    /// Sum of the terms with `|alpha| <= max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Polynomial {
        self.filter(|a| a.degree() <= max_degree)
    }

    fn filter(&self, keep: impl Fn(&MultiIndex) -> bool) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    /// `R^t`: scales the degree-`n` homogeneous part by `n^t` for `n >= 1`
    /// and drops the constant term for every `t`.
    pub fn radial_derivative(&self, t: f64) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            let n = a.degree();
            if n == 0 {
                continue;
            }
            out.add_term(a.clone(), c * (n as f64).powf(t));
        }
        out
    }

    /// Formal partial derivative `d/dz_{i+1}` (0-based `i`).
    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            let e = a.0[i];
            if e == 0 {
                continue;
            }
            let mut b = a.clone();
            b.0[i] -= 1;
            out.add_term(b, c * e as f64);
        }
        out
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, c)| {
                let mono =
                    a.0.iter()
                        .zip(z)
                        .fold(Complex64::new(1.0, 0.0), |acc, (&e, zi)| acc * zi.powu(e));
                c * mono
            })
            .sum()
    }

    /// Taylor polynomial of `1 / (1 - r psi)` through total degree
    /// `max_degree`. Requires `psi(0) = 0`, which makes each degree exact:
    /// `(r psi)^k` only contributes to degrees `>= k`.
    pub fn invert_one_minus(&self, r: f64, max_degree: u32) -> Result<Polynomial> {
        let c0 = self.constant_term();
        if c0 != Complex64::default() {
            return Err(Error::NonzeroConstantTerm {
                re: c0.re,
                im: c0.im,
            });
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("r = {r} not in [0, 1]")));
        }
        let step = self.scale_real(r).truncate(max_degree);
        let mut acc = Polynomial::one(self.dim);
        let mut power = Polynomial::one(self.dim);
        for _ in 0..max_degree {
            power = power.checked_mul(&step)?.truncate(max_degree);
            if power.is_zero() {
                break;
            }
            acc = acc.checked_add(&power)?;
        }
        Ok(acc)
    }

    /// Random polynomial of degree `<= max_degree`: every monomial gets a
    /// coefficient with real and imaginary parts uniform in `[-1, 1]`.
    pub fn random<R: rand::Rng>(rng: &mut R, dim: usize, max_degree: u32) -> Polynomial {
        let mut p = Polynomial::zero(dim);
        for alpha in monomials_up_to(dim, max_degree) {
            let c = Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
            p.add_term(alpha, c);
        }
        p
    }

    /// Largest coefficient modulus; `0` for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (i, &e) in a.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{}", i + 1)?,
                    _ => write!(f, "*z{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

pub fn poly_add(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    p.checked_add(q)
}

pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    p.checked_mul(q)
}

pub fn homogeneous_part(p: &Polynomial, n: u32) -> Polynomial {
    p.homogeneous_part(n)
}

pub fn radial_derivative(p: &Polynomial, t: f64) -> Polynomial {
    p.radial_derivative(t)
}

pub fn evaluate(p: &Polynomial, z: &[Complex64]) -> Result<Complex64> {
    p.evaluate(z)
}

pub fn invert_one_minus(psi: &Polynomial, r: f64, max_degree: u32) -> Result<Polynomial> {
    psi.invert_one_minus(r, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mono(e: &[u32], coef: f64) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(e.to_vec()).unwrap(), c(coef))
    }

    fn sum(ps: &[Polynomial]) -> Polynomial {
        ps.iter().fold(Polynomial::zero(ps[0].dim()), |a, p| {
            a.checked_add(p).unwrap()
        })
    }

    #[test]
    fn graded_order() {
        let basis = monomials_up_to(2, 2);
        let got: Vec<_> = basis.iter().map(|a| a.exponents().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        let mut sorted = basis.clone();
        sorted.sort();
        assert_eq!(sorted, basis);
        assert_eq!(monomials_up_to(3, 4).len(), 35);
    }

    #[test]
    fn add_examples() {
        let z1 = Polynomial::coordinate(2, 0);
        let z2 = Polynomial::coordinate(2, 1);
        assert!(poly_add(&z1, &z1.scale_real(-1.0)).unwrap().is_zero());
        let s = poly_add(&z1, &z2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(
            poly_add(&mono(&[2, 0], 2.0), &mono(&[2, 0], 3.0)).unwrap(),
            mono(&[2, 0], 5.0)
        );
        assert!(matches!(
            poly_add(&z1, &Polynomial::one(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let z1 = Polynomial::coordinate(2, 0);
        let z2 = Polynomial::coordinate(2, 1);
        assert_eq!(poly_mul(&z1, &z2).unwrap(), mono(&[1, 1], 1.0));
        let one = Polynomial::one(2);
        let a = one.checked_add(&z1).unwrap();
        let b = one.checked_sub(&z1).unwrap();
        let expect = one.checked_sub(&mono(&[2, 0], 1.0)).unwrap();
        assert_eq!(poly_mul(&a, &b).unwrap(), expect);
        assert!(poly_mul(&Polynomial::zero(2), &a).unwrap().is_zero());
        assert_eq!(Polynomial::zero(2).degree(), -1);
    }

    #[test]
    fn homogeneous_examples() {
        let p = sum(&[mono(&[0, 0], 1.0), mono(&[1, 0], 1.0), mono(&[1, 1], 1.0)]);
        assert_eq!(homogeneous_part(&p, 2), mono(&[1, 1], 1.0));
        assert!(homogeneous_part(&p, 3).is_zero());
        assert_eq!(homogeneous_part(&mono(&[2], 1.0), 2), mono(&[2], 1.0));
    }

    #[test]
    fn radial_examples() {
        assert!(radial_derivative(&Polynomial::one(2), 0.7).is_zero());
        assert!(radial_derivative(&Polynomial::one(2), 0.0).is_zero());
        let z1 = Polynomial::coordinate(2, 0);
        assert_eq!(radial_derivative(&z1, 1.0), z1);
        assert_eq!(
            radial_derivative(&mono(&[2, 1], 1.0), 2.0),
            mono(&[2, 1], 9.0)
        );
    }

    #[test]
    fn evaluate_examples() {
        let p = Polynomial::one(2)
            .checked_add(&Polynomial::coordinate(2, 0))
            .unwrap();
        assert_eq!(evaluate(&p, &[c(0.0), c(0.0)]).unwrap(), c(1.0));
        assert_eq!(
            evaluate(&mono(&[1, 1], 1.0), &[c(0.5), c(0.5)]).unwrap(),
            c(0.25)
        );
        let v = evaluate(&mono(&[2, 0], 1.0), &[Complex64::new(0.0, 1.0), c(0.0)]).unwrap();
        assert!((v - c(-1.0)).norm() < 1e-15);
        assert!(evaluate(&p, &[c(0.0)]).is_err());
    }

    #[test]
    fn invert_examples() {
        // geometric series oracle: sum_k (z/2)^k
        let psi = Polynomial::coordinate(1, 0);
        let got = invert_one_minus(&psi, 0.5, 2).unwrap();
        let expect = sum(&[mono(&[0], 1.0), mono(&[1], 0.5), mono(&[2], 0.25)]);
        assert_eq!(got, expect);

        assert_eq!(
            invert_one_minus(&Polynomial::zero(2), 0.3, 5).unwrap(),
            Polynomial::one(2)
        );

        let got = invert_one_minus(&mono(&[1, 1], 1.0), 1.0, 3).unwrap();
        assert_eq!(got, sum(&[mono(&[0, 0], 1.0), mono(&[1, 1], 1.0)]));

        assert!(matches!(
            invert_one_minus(&Polynomial::one(1), 0.5, 3),
            Err(Error::NonzeroConstantTerm { .. })
        ));
    }

    #[test]
    fn partial_derivative_basic() {
        let p = mono(&[3, 2], 2.0);
        assert_eq!(p.partial_derivative(0), mono(&[2, 2], 6.0));
        assert_eq!(p.partial_derivative(1), mono(&[3, 1], 4.0));
    }

    #[test]
    fn display_is_graded() {
        let p = sum(&[mono(&[0, 2], 1.0), mono(&[1, 0], -2.0), mono(&[0, 0], 3.0)]);
        assert_eq!(p.to_string(), "3 + -2*z1 + 1*z2^2");
    }
}
