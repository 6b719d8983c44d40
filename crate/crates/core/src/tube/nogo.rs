//! Diamond cross-sections where group averaging fails to produce curvature
//! invariants.

use num_traits::Zero;
use serde::Serialize;

use super::{integrand_poly, TubeError};
use crate::coxeter::{build_group, GroupType};
use crate::domains::{diamond_moment_ratio, moments, Domain};
use crate::poly::{average_group, rat, Mat, MultiIndex, Poly, Rat};

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Integrals over the m-diamond of the two quadratic invariants of its
/// symmetry group, `(t_1^2 + .. + t_{m-1}^2)/(m-1)` and `t_m^2`, each
/// divided by twice the area of the unit sphere in `R^{m-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct DiamondCodimGap {
    pub m: usize,
    #[serde(serialize_with = "ser_rat")]
    pub equatorial: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub polar: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub difference: Rat,
}

pub fn diamond_codim_gap(m: usize) -> Result<DiamondCodimGap, TubeError> {
    if m < 2 {
        return Err(TubeError::Invalid(format!(
            "diamond gap needs m >= 2, got {m}"
        )));
    }
    let axis = |i: usize| MultiIndex::axis(m, i, 2);
    // by O(m-1) symmetry the equatorial average equals the t_1^2 moment
    let equatorial = diamond_moment_ratio(m, &axis(0)) / rat(2, 1);
    let polar = diamond_moment_ratio(m, &axis(m - 1)) / rat(2, 1);
    Ok(DiamondCodimGap {
        m,
        difference: &equatorial - &polar,
        equatorial,
        polar,
    })
}

/// Averaging `prod_i (1 - t_1 a_i - t_2 b_i)` over the square's symmetry
/// group: `1 + A (t1^2 + t2^2) + B t1^2 t2^2 + C (t1^4 + t2^4)`.
#[derive(Clone, Debug, Serialize)]
pub struct FourfoldInvariants {
    #[serde(serialize_with = "ser_rat")]
    pub a: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub b: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub c: Rat,
    /// `(1/2) sum_{i<j} (a_i a_j + b_i b_j)`.
    #[serde(serialize_with = "ser_rat")]
    pub a_closed: Rat,
    /// Sum over the 6 ordered ways to split the indices into a pair for `a`
    /// and a pair for `b`.
    #[serde(serialize_with = "ser_rat")]
    pub b_closed: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub c_closed: Rat,
    /// `(1/2) sum_{i<j} R_ij^{ij}` from the Gauss tensor.
    #[serde(serialize_with = "ser_rat")]
    pub a_intrinsic: Rat,
    /// `B + 6C` against the sum of `R_ij^{ij} R_kl^{kl}` over the 3
    /// splittings of the indices into two pairs.
    #[serde(serialize_with = "ser_rat")]
    pub b_plus_6c: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub b_plus_6c_intrinsic: Rat,
    /// `int t1^2 t2^2` over the unit square diamond.
    #[serde(serialize_with = "ser_rat")]
    pub mixed_moment: Rat,
    /// `int (t1^4 + t2^4)`.
    #[serde(serialize_with = "ser_rat")]
    pub pure_moment: Rat,
    /// `pure_moment - 6 mixed_moment`; nonzero means `B` and `C` enter the
    /// volume in a combination that is not `B + 6C`.
    #[serde(serialize_with = "ser_rat")]
    pub gap: Rat,
}

pub fn diamond_fourfold_invariants(
    a: &[Rat; 4],
    b: &[Rat; 4],
) -> Result<FourfoldInvariants, TubeError> {
    let h: Vec<Mat<Rat>> = [a, b]
        .iter()
        .map(|v| Mat::from_fn(4, |i, j| if i == j { v[i].clone() } else { Rat::zero() }))
        .collect();
    let det: Poly<Rat> = integrand_poly(&h, &[1.0, 1.0])?;
    let group = build_group(GroupType::B(2))?;
    let elements = group
        .exact_elements()
        .ok_or_else(|| TubeError::Invalid("B2 elements are not exact".into()))?;
    let avg = average_group(&det, &elements)?;
    let mono = |p: u32, q: u32| MultiIndex::new(vec![p, q]);

    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let r = |i: usize, j: usize| &a[i] * &a[j] + &b[i] * &b[j];
    let a_closed = pairs
        .iter()
        .fold(Rat::zero(), |s, &(i, j)| s + &a[i] * &a[j] + &b[i] * &b[j])
        / rat(2, 1);
    let a_intrinsic = pairs.iter().fold(Rat::zero(), |s, &(i, j)| s + r(i, j)) / rat(2, 1);
    let complement = |i: usize, j: usize| {
        let rest: Vec<usize> = (0..4).filter(|k| *k != i && *k != j).collect();
        (rest[0], rest[1])
    };
    let b_closed = pairs.iter().fold(Rat::zero(), |s, &(i, j)| {
        let (k, l) = complement(i, j);
        s + &a[i] * &a[j] * &b[k] * &b[l]
    });
    let prod = |v: &[Rat; 4]| v.iter().fold(rat(1, 1), |p, x| p * x);
    let c_closed = (prod(a) + prod(b)) / rat(2, 1);
    let b_plus_6c_intrinsic = [(0, 1), (0, 2), (0, 3)]
        .iter()
        .fold(Rat::zero(), |s, &(i, j)| {
            let (k, l) = complement(i, j);
            s + r(i, j) * r(k, l)
        });

    let table = moments(&Domain::Diamond { m: 2 }, 4)?;
    let exact = |p, q| {
        table
            .get(&mono(p, q))
            .exact()
            .cloned()
            .ok_or_else(|| TubeError::Invalid("square diamond moments should be exact".into()))
    };
    let mixed_moment = exact(2, 2)?;
    let pure_moment = exact(4, 0)? + exact(0, 4)?;
    let b_coeff = avg.coeff(&mono(2, 2));
    let c_coeff = avg.coeff(&mono(4, 0));
    Ok(FourfoldInvariants {
        a: avg.coeff(&mono(2, 0)),
        b_plus_6c: &b_coeff + &c_coeff * rat(6, 1),
        b: b_coeff,
        c: c_coeff,
        a_closed,
        b_closed,
        c_closed,
        a_intrinsic,
        b_plus_6c_intrinsic,
        gap: &pure_moment - &mixed_moment * rat(6, 1),
        mixed_moment,
        pure_moment,
    })
}
