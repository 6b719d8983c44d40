//! Sparse multivariate polynomials in the normal variables `t_1..t_m`.
//!
//! Coefficients are generic over [`Coeff`], implemented for exact rationals
//! ([`Rat`]) and for `f64`. Exact arithmetic is the default for every
//! computation whose outcome is a yes/no equality; floats are used where
//! the input data is irrational (curvature data, non-crystallographic
//! group matrices).

mod average;
mod det;
mod haar;
mod json;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use average::{
    average_group, average_group_at, average_orthogonal, double_factorial, rising_even_product,
    sphere_moment, Mat, RadialPoly,
};
pub use det::{poly_det, MAX_DET_SIZE};
pub use haar::{haar_sample_orthogonal, haar_sample_with_rng};
pub use json::PolyJson;

/// Exact rational number; numerator and denominator kept in lowest terms.
pub type Rat = BigRational;

/// Builds `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: usize, found: usize },
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },
    #[error("determinant size {0} exceeds the Leibniz limit of {max}", max = MAX_DET_SIZE)]
    TooLarge(usize),
    #[error("group element {index} is not orthogonal (Gram defect {defect:e})")]
    NotOrthogonal { index: usize, defect: f64 },
    #[error("group element {index} has dimension {found}, expected {expected}")]
    ElementDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("orthogonal averaging needs at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// Coefficient ring for [`Poly`].
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rat(r: &Rat) -> Self;
    fn to_f64(&self) -> f64;
    /// Magnitude used for tolerance checks; exact types return exact zero tests.
    fn is_negligible(&self, tol: f64) -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_rat(&Rat::from_integer(BigInt::from(v)))
    }
}

impl Coeff for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Coeff for f64 {
    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

/// Exponent vector of a monomial `t^alpha`.
///
/// Ordering is graded lexicographic: total degree first, then exponents
/// compared left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    /// `e_i` scaled by `power`.
    pub fn axis(m: usize, i: usize, power: u32) -> Self {
        let mut v = vec![0; m];
        v[i] = power;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn all_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Every multi-index of length `m` with total degree exactly `d`, in graded lex order.
    pub fn of_degree(m: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == m {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(m, left - a, cur, out);
                cur.pop();
            }
        }
        if m == 0 {
            return if d == 0 {
                vec![MultiIndex(vec![])]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(m, d, &mut Vec::with_capacity(m), &mut out);
        out.sort();
        out
    }

    /// Every multi-index with total degree at most `max_degree`.
    pub fn up_to_degree(m: usize, max_degree: u32) -> Vec<MultiIndex> {
        (0..=max_degree)
            .flat_map(|d| Self::of_degree(m, d))
            .collect()
    }

    /// `t^alpha` evaluated at a point.
    pub fn eval(&self, t: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(t)
            .map(|(&a, &x)| x.powi(a as i32))
            .product()
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Sparse polynomial in `m` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C: Coeff> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    /// The coordinate function `t_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::axis(nvars, i, 1), C::one())
    }

    pub fn monomial(alpha: MultiIndex, c: C) -> Self {
        let mut p = Self::zero(alpha.len());
        p.add_term(alpha, c);
        p
    }

    /// `c_0 + sum_i c_i t_i`.
    pub fn linear(constant: C, coeffs: &[C]) -> Self {
        let m = coeffs.len();
        let mut p = Self::constant(m, constant);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::axis(m, i, 1), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (alpha, c) in terms {
            assert_eq!(alpha.len(), nvars, "multi-index length mismatch");
            p.add_term(alpha, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C {
        self.terms.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: C) {
        debug_assert_eq!(alpha.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&alpha);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.degree() == d)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops coefficients with magnitude at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| !c.is_negligible(tol));
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        self.terms.iter().map(|(a, c)| c.to_f64() * a.eval(t)).sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `t_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, c) in &self.terms {
            let e = a.0[i];
            if e == 0 {
                continue;
            }
            let mut b = a.0.clone();
            b[i] -= 1;
            out.add_term(MultiIndex(b), c.clone() * C::from_i64(e as i64));
        }
        out
    }

    /// `p(g t)` where `(g t)_i = sum_j g_ij t_j`.
    pub fn compose_linear(&self, g: &Mat<C>) -> Self {
        assert_eq!(g.dim(), self.nvars, "matrix dimension mismatch");
        let m = self.nvars;
        let forms: Vec<Poly<C>> = (0..m)
            .map(|i| {
                let row: Vec<C> = (0..m).map(|j| g.get(i, j).clone()).collect();
                Poly::linear(C::zero(), &row)
            })
            .collect();
        let maxdeg = self
            .terms
            .keys()
            .map(|a| *a.0.iter().max().unwrap_or(&0))
            .max()
            .unwrap_or(0);
        // powers[i][k] = (g t)_i^k
        let powers: Vec<Vec<Poly<C>>> = forms
            .iter()
            .map(|f| {
                let mut v = vec![Poly::one(m)];
                for k in 1..=maxdeg as usize {
                    let next = &v[k - 1] * f;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(m);
        for (a, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (i, &e) in a.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Coefficient-wise conversion to another coefficient type.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), f(c));
        }
        out
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map_coeffs(|c| c.to_f64())
    }
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &'a Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &'a Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &'a Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.add(b), x.clone() * y.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &e) in a.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{e}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(m: usize, i: usize) -> Poly<Rat> {
        Poly::var(m, i)
    }

    #[test]
    fn graded_lex_order() {
        let mut v = vec![
            MultiIndex::new(vec![0, 2]),
            MultiIndex::new(vec![1, 0]),
            MultiIndex::new(vec![0, 0]),
            MultiIndex::new(vec![1, 1]),
            MultiIndex::new(vec![0, 1]),
        ];
        v.sort();
        let got: Vec<_> = v.iter().map(|a| a.to_string()).collect();
        assert_eq!(got, ["(0,0)", "(0,1)", "(1,0)", "(0,2)", "(1,1)"]);
    }

    #[test]
    fn of_degree_counts() {
        // C(d+m-1, m-1)
        assert_eq!(MultiIndex::of_degree(3, 4).len(), 15);
        assert_eq!(MultiIndex::of_degree(1, 5).len(), 1);
        assert_eq!(MultiIndex::up_to_degree(2, 3).len(), 10);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = &t(2, 0) - &t(2, 0);
        assert!(p.is_zero());
        let one = Poly::<Rat>::one(2);
        let q = &(&one - &t(2, 0)) * &(&one + &t(2, 0));
        // 1 - t1^2
        assert_eq!(q.num_terms(), 2);
        assert_eq!(q.coeff(&MultiIndex::new(vec![2, 0])), rat(-1, 1));
    }

    #[test]
    fn compose_with_swap() {
        let p = &t(2, 0).pow(3) + &t(2, 1);
        let swap = Mat::from_rows(vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]]);
        let q = p.compose_linear(&swap);
        assert_eq!(q, &t(2, 1).pow(3) + &t(2, 0));
    }

    #[test]
    fn derivative_and_eval() {
        // p = 3 t1^2 t2 + t2
        let p = &t(2, 0).pow(2).scale(&rat(3, 1)) * &t(2, 1);
        let p = &p + &t(2, 1);
        let dp = p.derivative(0);
        assert_eq!(dp.coeff(&MultiIndex::new(vec![1, 1])), rat(6, 1));
        assert!((p.eval(&[2.0, 0.5]) - 6.5).abs() < 1e-15);
    }
}
