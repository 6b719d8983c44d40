use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Coeff, MultiIndex, Poly, PolyError, Rat};
use crate::par;

/// Orthogonality tolerance for group elements supplied as floats.
const GRAM_TOL: f64 = 1e-9;

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<C> {
    dim: usize,
    data: Vec<C>,
}

impl<C: Coeff> Mat<C> {
    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Mat {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Mat { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Mat<C>) -> Mat<C> {
        let n = self.dim;
        Mat::from_fn(n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| {
                acc + self.get(i, k).clone() * other.get(k, j).clone()
            })
        })
    }

    pub fn transpose(&self) -> Mat<C> {
        Mat::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    /// `max |(M^T M - I)_ij|`.
    pub fn gram_defect(&self) -> f64 {
        let g = self.transpose().mul(self);
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { C::one() } else { C::zero() };
                worst = worst.max((g.get(i, j).clone() - target).to_f64().abs());
            }
        }
        worst
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_f64() * x[j]).sum())
            .collect()
    }
}

/// `(k)!!` with the convention `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut j = k;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    acc
}

/// `m (m+2) ... (m+d-2)` for even `d`; the empty product (d = 0) is 1.
pub fn rising_even_product(m: usize, d: u32) -> BigInt {
    assert!(d % 2 == 0, "rising_even_product needs even degree");
    (0..d / 2).fold(BigInt::one(), |acc, j| {
        acc * BigInt::from(m + 2 * j as usize)
    })
}

/// Average of `t^alpha` over the unit sphere `S^{m-1}`.
///
/// Zero unless every exponent is even, otherwise
/// `prod_i (alpha_i - 1)!! / (m (m+2) ... (m + |alpha| - 2))`.
pub fn sphere_moment(m: usize, alpha: &MultiIndex) -> Rat {
    assert_eq!(alpha.len(), m, "multi-index length must equal dimension");
    if !alpha.all_even() {
        return Rat::zero();
    }
    let num = alpha.exponents().iter().fold(BigInt::one(), |acc, &a| {
        acc * double_factorial(a as i64 - 1)
    });
    Rat::new(num, rising_even_product(m, alpha.degree()))
}

/// Polynomial in `|t|^2`; `coeffs[k]` multiplies `|t|^{2k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialPoly<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> RadialPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RadialPoly { coeffs }
    }

    /// Coefficient of `|t|^d`; odd `d` is always zero.
    pub fn coeff(&self, d: u32) -> C {
        if d % 2 == 1 {
            return C::zero();
        }
        self.coeffs
            .get((d / 2) as usize)
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        (2 * self.coeffs.len()).saturating_sub(2) as u32
    }

    pub fn eval(&self, norm: f64) -> f64 {
        let r2 = norm * norm;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r2 + c.to_f64())
    }

    /// Expands back into the variables `t_1..t_m`.
    pub fn to_poly(&self, m: usize) -> Poly<C> {
        let norm2 = (0..m).fold(Poly::zero(m), |acc, i| {
            let v = Poly::<C>::var(m, i);
            &acc + &(&v * &v)
        });
        let mut out = Poly::zero(m);
        for (k, c) in self.coeffs.iter().enumerate() {
            out = &out + &norm2.pow(k as u32).scale(c);
        }
        out
    }
}

/// Average of `p(g t)` over the full orthogonal group `O(m)`.
pub fn average_orthogonal<C: Coeff>(p: &Poly<C>) -> Result<RadialPoly<C>, PolyError> {
    let m = p.nvars();
    if m < 2 {
        return Err(PolyError::TooFewVariables(m));
    }
    let deg = p.degree();
    let mut coeffs = vec![C::zero(); (deg / 2 + 1) as usize];
    for (alpha, c) in p.terms() {
        if !alpha.all_even() {
            continue;
        }
        let s = C::from_rat(&sphere_moment(m, alpha));
        let k = (alpha.degree() / 2) as usize;
        coeffs[k] = coeffs[k].clone() + c.clone() * s;
    }
    Ok(RadialPoly::new(coeffs))
}

fn check_elements<C: Coeff>(m: usize, elements: &[Mat<C>]) -> Result<(), PolyError> {
    for (index, g) in elements.iter().enumerate() {
        if g.dim() != m {
            return Err(PolyError::ElementDimension {
                index,
                expected: m,
                found: g.dim(),
            });
        }
        let defect = g.gram_defect();
        if defect > GRAM_TOL {
            return Err(PolyError::NotOrthogonal { index, defect });
        }
    }
    Ok(())
}

/// Uniform average `(1/|G|) sum_g p(g t)` over a finite matrix group.
pub fn average_group<C: Coeff>(p: &Poly<C>, elements: &[Mat<C>]) -> Result<Poly<C>, PolyError> {
    let m = p.nvars();
    check_elements(m, elements)?;
    if elements.is_empty() {
        return Ok(p.clone());
    }
    let parts = par::map_slice(elements, |g| p.compose_linear(g));
    let sum = parts.iter().fold(Poly::zero(m), |acc, q| &acc + q);
    let inv = C::from_rat(&Rat::new(BigInt::one(), BigInt::from(elements.len())));
    Ok(sum.scale(&inv))
}

/// Group average evaluated at a single point, without expanding `p(g t)`.
pub fn average_group_at<C: Coeff>(
    p: &Poly<C>,
    elements: &[Mat<C>],
    t: &[f64],
) -> Result<f64, PolyError> {
    check_elements(p.nvars(), elements)?;
    let vals = par::map_slice(elements, |g| p.eval(&g.apply(t)));
    Ok(vals.iter().sum::<f64>() / elements.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn quad_sphere2(alpha: (u32, u32)) -> f64 {
        // periodic trapezoid on the unit circle, exact for trigonometric polynomials
        let n = 256;
        (0..n)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                phi.cos().powi(alpha.0 as i32) * phi.sin().powi(alpha.1 as i32)
            })
            .sum::<f64>()
            / n as f64
    }

    #[test]
    fn sphere_moment_axis_case() {
        // (d-1)!! / (m (m+2) ... (m+d-2))
        assert_eq!(sphere_moment(3, &MultiIndex::new(vec![2, 0, 0])), rat(1, 3));
        assert_eq!(
            sphere_moment(3, &MultiIndex::new(vec![4, 0, 0])),
            rat(3, 15)
        );
        assert_eq!(
            sphere_moment(5, &MultiIndex::new(vec![0, 0, 6, 0, 0])),
            rat(15, 5 * 7 * 9)
        );
        assert_eq!(
            sphere_moment(4, &MultiIndex::new(vec![3, 1, 0, 0])),
            rat(0, 1)
        );
    }

    #[test]
    fn sphere_moment_matches_circle_quadrature() {
        assert_eq!(sphere_moment(2, &MultiIndex::new(vec![2, 2])), rat(1, 8));
        for a in 0..7u32 {
            for b in 0..7u32 {
                let exact = sphere_moment(2, &MultiIndex::new(vec![a, b])).to_f64();
                assert!(
                    (exact - quad_sphere2((a, b))).abs() < 1e-14,
                    "alpha=({a},{b})"
                );
            }
        }
    }

    #[test]
    fn sphere_moment_normalization() {
        // multinomial expansion of |t|^d averaged over the sphere is 1
        for m in 2..6usize {
            for half in 0..=4u32 {
                let mut total = Rat::zero();
                for beta in MultiIndex::of_degree(m, half) {
                    let alpha = MultiIndex::new(beta.exponents().iter().map(|b| 2 * b).collect());
                    let mut multinom = BigInt::from(factorial(half));
                    for &b in beta.exponents() {
                        multinom /= BigInt::from(factorial(b));
                    }
                    total += Rat::from_integer(multinom) * sphere_moment(m, &alpha);
                }
                assert_eq!(total, Rat::one(), "m={m} d={}", 2 * half);
            }
        }
    }

    fn factorial(k: u32) -> u64 {
        (1..=k as u64).product()
    }

    #[test]
    fn average_orthogonal_examples() {
        let t1: Poly<Rat> = Poly::var(3, 0);
        let avg = average_orthogonal(&(&t1 * &t1)).unwrap();
        assert_eq!(avg.coeff(2), rat(1, 3));
        assert_eq!(avg.coeff(0), rat(0, 1));

        let lin = Poly::linear(rat(0, 1), &[rat(1, 1), rat(5, 1)]);
        assert!(average_orthogonal(&lin).unwrap().is_zero());

        // (1 - t1)^2 with m = 2 averages to 1 + |t|^2 / 2
        let d = Poly::linear(rat(1, 1), &[rat(-1, 1), rat(0, 1)]);
        let avg = average_orthogonal(&(&d * &d)).unwrap();
        assert_eq!(avg.coeff(0), rat(1, 1));
        assert_eq!(avg.coeff(2), rat(1, 2));
    }

    fn b2() -> Vec<Mat<Rat>> {
        let mut out = Vec::new();
        for swap in [false, true] {
            for s1 in [1, -1] {
                for s2 in [1, -1] {
                    out.push(Mat::from_fn(2, |i, j| {
                        let col = if swap { 1 - i } else { i };
                        if j != col {
                            rat(0, 1)
                        } else if i == 0 {
                            rat(s1, 1)
                        } else {
                            rat(s2, 1)
                        }
                    }));
                }
            }
        }
        out
    }

    #[test]
    fn average_over_b2() {
        let t1: Poly<Rat> = Poly::var(2, 0);
        let t2: Poly<Rat> = Poly::var(2, 1);
        let avg = average_group(&t1.pow(4), &b2()).unwrap();
        let expect = (&t1.pow(4) + &t2.pow(4)).scale(&rat(1, 2));
        assert_eq!(avg, expect);

        let central = vec![
            Mat::<Rat>::identity(2),
            Mat::from_fn(2, |i, j| if i == j { rat(-1, 1) } else { rat(0, 1) }),
        ];
        assert!(average_group(&t1, &central).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_orthogonal() {
        let bad = vec![Mat::from_rows(vec![vec![2.0, 0.0], vec![0.0, 1.0]])];
        let p: Poly<f64> = Poly::var(2, 0);
        assert!(matches!(
            average_group(&p, &bad),
            Err(PolyError::NotOrthogonal { .. })
        ));
    }

    proptest! {
        #[test]
        fn group_average_is_idempotent(c in proptest::collection::vec(-3i64..4, 10)) {
            let terms = MultiIndex::up_to_degree(2, 3).into_iter().zip(c.iter().map(|&x| rat(x, 1)));
            let p = Poly::from_terms(2, terms);
            let once = average_group(&p, &b2()).unwrap();
            let twice = average_group(&once, &b2()).unwrap();
            prop_assert_eq!(&once, &twice);
            // projection compatibility with the orthogonal average
            prop_assert_eq!(average_orthogonal(&once).unwrap(), average_orthogonal(&p).unwrap());
        }
    }
}
