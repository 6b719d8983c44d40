use super::{Coeff, Poly, PolyError};

/// Largest matrix handled by the Leibniz expansion (8! = 40320 permutations).
pub const MAX_DET_SIZE: usize = 8;

/// Determinant of a square matrix of polynomials by Leibniz expansion.
pub fn poly_det<C: Coeff>(entries: &[Vec<Poly<C>>]) -> Result<Poly<C>, PolyError> {
    let n = entries.len();
    if n > MAX_DET_SIZE {
        return Err(PolyError::TooLarge(n));
    }
    for (row, r) in entries.iter().enumerate() {
        if r.len() != n {
            return Err(PolyError::NotSquare {
                rows: n,
                row,
                cols: r.len(),
            });
        }
    }
    if n == 0 {
        return Ok(Poly::one(0));
    }
    let m = entries[0][0].nvars();
    for r in entries {
        for e in r {
            if e.nvars() != m {
                return Err(PolyError::VariableMismatch {
                    expected: m,
                    found: e.nvars(),
                });
            }
        }
    }

    let mut total = Poly::zero(m);
    let mut perm: Vec<usize> = (0..n).collect();
    for_each_permutation(&mut perm, 0, true, &mut |p, even| {
        let mut term = Poly::one(m);
        for (i, &j) in p.iter().enumerate() {
            let e = &entries[i][j];
            if e.is_zero() {
                return;
            }
            term = &term * e;
        }
        total = if even { &total + &term } else { &total - &term };
    });
    Ok(total)
}

/// Heap-free recursive permutation walk with parity tracking by transpositions.
fn for_each_permutation(
    perm: &mut Vec<usize>,
    k: usize,
    even: bool,
    f: &mut impl FnMut(&[usize], bool),
) {
    if k == perm.len() {
        f(perm, even);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        for_each_permutation(perm, k + 1, if i == k { even } else { !even }, f);
        perm.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, MultiIndex, Rat};
    use proptest::prelude::*;

    fn lin(c0: i64, c: &[i64]) -> Poly<Rat> {
        let cs: Vec<Rat> = c.iter().map(|&x| rat(x, 1)).collect();
        Poly::linear(rat(c0, 1), &cs)
    }

    #[test]
    fn one_by_one_is_identity() {
        let e = lin(1, &[-3, -5]);
        assert_eq!(poly_det(&[vec![e.clone()]]).unwrap(), e);
    }

    #[test]
    fn diagonal_two_by_two() {
        let d = lin(1, &[-1, 0]);
        let z = Poly::zero(2);
        let det = poly_det(&[vec![d.clone(), z.clone()], vec![z, d]]).unwrap();
        // 1 - 2 t1 + t1^2
        assert_eq!(det.coeff(&MultiIndex::new(vec![0, 0])), rat(1, 1));
        assert_eq!(det.coeff(&MultiIndex::new(vec![1, 0])), rat(-2, 1));
        assert_eq!(det.coeff(&MultiIndex::new(vec![2, 0])), rat(1, 1));
        assert_eq!(det.num_terms(), 3);
    }

    #[test]
    fn identity_direction_gives_binomial_power() {
        // h = identity in normal direction 1: det(delta - t1 delta) = (1 - t1)^4
        let n = 4;
        let m = 2;
        let entries: Vec<Vec<Poly<Rat>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            lin(1, &[-1, 0])
                        } else {
                            Poly::zero(m)
                        }
                    })
                    .collect()
            })
            .collect();
        let det = poly_det(&entries).unwrap();
        // independent oracle: binomial coefficients of (1 - t1)^4
        let binom = [1, -4, 6, -4, 1];
        for (k, &b) in binom.iter().enumerate() {
            assert_eq!(det.coeff(&MultiIndex::new(vec![k as u32, 0])), rat(b, 1));
        }
        assert_eq!(det.num_terms(), 5);
    }

    #[test]
    fn rejects_large_and_ragged() {
        let m = 1;
        let big: Vec<Vec<Poly<Rat>>> = vec![vec![Poly::one(m); 9]; 9];
        assert_eq!(poly_det(&big), Err(PolyError::TooLarge(9)));
        let ragged = vec![vec![Poly::<Rat>::one(m); 2], vec![Poly::one(m)]];
        assert!(matches!(
            poly_det(&ragged),
            Err(PolyError::NotSquare { .. })
        ));
        let mixed = vec![
            vec![Poly::<Rat>::one(1), Poly::one(1)],
            vec![Poly::one(2), Poly::one(1)],
        ];
        assert!(matches!(
            poly_det(&mixed),
            Err(PolyError::VariableMismatch { .. })
        ));
    }

    fn cofactor3(a: &[Vec<Poly<Rat>>]) -> Poly<Rat> {
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            &(&a[r1][c1] * &a[r2][c2]) - &(&a[r1][c2] * &a[r2][c1])
        };
        let t0 = &a[0][0] * &minor(1, 2, 1, 2);
        let t1 = &a[0][1] * &minor(1, 2, 0, 2);
        let t2 = &a[0][2] * &minor(1, 2, 0, 1);
        &(&t0 - &t1) + &t2
    }

    proptest! {
        #[test]
        fn leibniz_matches_cofactor(coeffs in proptest::collection::vec(-4i64..5, 27)) {
            let a: Vec<Vec<Poly<Rat>>> = (0..3)
                .map(|i| (0..3).map(|j| {
                    let k = 3 * (3 * i + j);
                    lin(coeffs[k], &coeffs[k + 1..k + 3])
                }).collect())
                .collect();
            prop_assert_eq!(poly_det(&a).unwrap(), cofactor3(&a));
        }
    }
}
