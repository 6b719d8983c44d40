use std::f64::consts::PI;

use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::diffgeo::{contract_hd, CurvatureTensor, Manifold};
use crate::poly::{average_orthogonal, rat, MultiIndex, Rat};

fn sym(n: usize, vals: &[i64], den: i64) -> Mat<Rat> {
    let mut k = 0;
    let mut upper = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            upper[i][j] = rat(vals[k], den);
            k += 1;
        }
    }
    Mat::from_fn(n, |i, j| upper[i.min(j)][i.max(j)].clone())
}

#[test]
fn curve_integrand() {
    let kappa = rat(3, 7);
    let h = vec![
        Mat::from_fn(1, |_, _| kappa.clone()),
        Mat::from_fn(1, |_, _| Rat::zero()),
    ];
    let p = integrand_poly(&h, &[1.0, 1.0]).unwrap();
    let expect = Poly::linear(rat(1, 1), &[-kappa, Rat::zero()]);
    assert_eq!(p, expect);
}

#[test]
fn surface_integrand_expansion() {
    // 1 - sum t_p tr h^p + sum t_p t_q (h11^p h22^q - h12^p h21^q)
    let h = [sym(2, &[1, 2, 3], 1), sym(2, &[-1, 4, 5], 2)];
    let p = integrand_poly(&h, &[1.0, 1.0]).unwrap();
    let g = |p: usize, i: usize, j: usize| h[p].get(i, j).clone();
    let mut expect = Poly::one(2);
    for a in 0..2 {
        expect.add_term(MultiIndex::axis(2, a, 1), -(g(a, 0, 0) + g(a, 1, 1)));
        for b in 0..2 {
            let mut e = vec![0, 0];
            e[a] += 1;
            e[b] += 1;
            expect.add_term(
                MultiIndex::new(e),
                g(a, 0, 0) * g(b, 1, 1) - g(a, 0, 1) * g(b, 1, 0),
            );
        }
    }
    assert_eq!(p, expect);
}

#[test]
fn timelike_slot_flips_odd_powers() {
    let h = [sym(2, &[1, 2, 3], 1), sym(2, &[-1, 4, 5], 2)];
    let e = integrand_poly(&h, &[1.0, 1.0]).unwrap();
    let l = integrand_poly(&h, &[1.0, -1.0]).unwrap();
    for (alpha, c) in e.terms() {
        let flip = if alpha.exponents()[1] % 2 == 1 {
            -c.clone()
        } else {
            c.clone()
        };
        assert_eq!(l.coeff(alpha), flip);
    }
}

fn gauss_tensor(h: &[Mat<Rat>]) -> CurvatureTensor<Rat> {
    let n = h[0].dim();
    CurvatureTensor::from_fn(n, |i, j, k, l| {
        h.iter().fold(Rat::zero(), |acc, hp| {
            acc + hp.get(i, k).clone() * hp.get(j, l).clone()
                - hp.get(j, k).clone() * hp.get(i, l).clone()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    /// The orthogonal average of the determinant is `sum_d c(m, d) H_d |t|^d`.
    #[test]
    fn average_is_lipschitz_killing_series(vals in proptest::collection::vec(-6i64..=6, 18), m in 2usize..=3) {
        let n = 3;
        let h: Vec<Mat<Rat>> = (0..m).map(|p| sym(n, &vals[6 * p..6 * p + 6], 3)).collect();
        let avg = average_orthogonal(&integrand_poly(&h, &vec![1.0; m]).unwrap()).unwrap();
        let r = gauss_tensor(&h);
        for d in [0u32, 2] {
            let expect = contract_hd(&r, d as usize).unwrap()
                / Rat::from_integer(rising_even_product(m, d));
            prop_assert_eq!(avg.coeff(d), expect);
        }
        prop_assert!(avg.coeff(4).is_zero());
    }
}

fn shell(r: f64, a: f64) -> f64 {
    4.0 * PI / 3.0 * ((r + a).powi(3) - (r - a).powi(3))
}

#[test]
fn sphere_shell_both_paths() {
    let m = Manifold::euclidean(ManifoldSpec::Sphere {
        radius: 2.0,
        dim: 2,
    })
    .unwrap();
    let d = Domain::Cube { m: 1 };
    let radii = [0.05, 0.2];
    let opts = TubeOptions::default();
    let ext = tube_volume_extrinsic(&m, &d, &radii, &opts).unwrap();
    let int = tube_volume_intrinsic(&m, &d, &radii, &opts).unwrap();
    for (k, &a) in radii.iter().enumerate() {
        let exact = shell(2.0, a);
        assert!((ext.volumes[k] - exact).abs() / exact < 1e-9);
        assert!((int.path.volumes[k] - exact).abs() / exact < 1e-9);
    }
    assert!((int.lipschitz_killing[1].1 - 4.0 * PI).abs() < 1e-9);
    assert!(ext.coefficients[1].abs() < 1e-9);
}

#[test]
fn report_checks() {
    let m = Manifold::euclidean(ManifoldSpec::Torus {
        major: 3.0,
        minor: 1.0,
    })
    .unwrap();
    let d = Domain::Cube { m: 1 };
    let r = tube_report(&m, &d, &[0.1], &TubeOptions::default(), None).unwrap();
    assert!(r.v0_check.defect < 1e-9);
    assert!((r.reach - 1.0).abs() < 1e-9);
    assert!(r.max_odd_coefficient < 1e-9);
    assert!(r.verdict.guaranteed);
    assert!(r.max_relative_discrepancy.unwrap() < 1e-9);
    let err = tube_report(&m, &d, &[1.0], &TubeOptions::default(), None).unwrap_err();
    assert!(matches!(err, TubeError::BeyondReach { .. }));
    assert!(matches!(
        tube_report(
            &m,
            &Domain::Ball { m: 2 },
            &[0.1],
            &TubeOptions::default(),
            None
        ),
        Err(TubeError::DimensionMismatch { .. })
    ));
    assert!(matches!(
        tube_report(&m, &d, &[-0.1], &TubeOptions::default(), None),
        Err(TubeError::BadRadius(_))
    ));
}

#[test]
fn hypersurface_in_minkowski_space_alternates() {
    // graph (x, y, f) with f timelike, cross-section [-1, 1]
    let spec = ManifoldSpec::Graph {
        heights: vec![vec![(2, 0, 0.2), (1, 1, 0.1), (0, 2, -0.15)]],
        half_width: 1.0,
    };
    let m = Manifold::new(spec, Signature::Lorentzian).unwrap();
    let d = Domain::Cube { m: 1 };
    let opts = TubeOptions::default();
    let ext = tube_volume_extrinsic(&m, &d, &[0.1], &opts).unwrap();
    let int = tube_volume_intrinsic(&m, &d, &[0.1], &opts).unwrap();
    assert!(int.alternating_sign);
    assert!(int.lipschitz_killing[1].1.abs() > 1e-3);
    // d = 2 term: -2 k_2 a^3 / 3
    assert!((int.path.coefficients[2] + 2.0 * int.lipschitz_killing[1].1 / 3.0).abs() < 1e-12);
    assert!((ext.coefficients[2] - int.path.coefficients[2]).abs() < 1e-9);
}

#[test]
fn mixed_normal_signature_is_rejected_for_intrinsic() {
    let spec = ManifoldSpec::Graph {
        heights: vec![vec![(2, 0, 0.2)], vec![(0, 2, 0.1)]],
        half_width: 1.0,
    };
    let m = Manifold::new(spec, Signature::Lorentzian).unwrap();
    let d = Domain::Diamond { m: 2 };
    let e = tube_volume_intrinsic(&m, &d, &[0.1], &TubeOptions::default()).unwrap_err();
    assert!(matches!(e, TubeError::MixedNormalSignature(2)));
    let r = tube_report(&m, &d, &[0.1], &TubeOptions::default(), None).unwrap();
    assert!(r.intrinsic.is_none() && r.intrinsic_skipped.is_some());
}
