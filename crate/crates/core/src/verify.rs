//! Named self-checks against pinned exact constants and closed forms.

use std::f64::consts::PI;
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::coxeter::{build_group, GroupType};
use crate::diffgeo::{Manifold, ManifoldSpec, Signature};
use crate::domains::{build_radial_counterexample, symmetric_of_degree, Domain, TrigSeries};
use crate::poly::{
    average_group, average_orthogonal, double_factorial, rat, rising_even_product, Mat, MultiIndex,
    Rat,
};
use crate::tube::{
    diamond_codim_gap, diamond_fourfold_invariants, integrand_poly, tube_volume_extrinsic,
    tube_volume_intrinsic, TubeOptions,
};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub group: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Outcome = Result<String, String>;

struct Check {
    name: &'static str,
    group: &'static str,
    run: fn() -> Outcome,
}

const CHECKS: &[Check] = &[
    Check {
        name: "square_diamond_moments",
        group: "moments",
        run: square_diamond_moments,
    },
    Check {
        name: "diamond_codim_gap",
        group: "nogo",
        run: codim_gap,
    },
    Check {
        name: "identity_case_constant",
        group: "polycore",
        run: identity_case,
    },
    Check {
        name: "degree_table",
        group: "coxeter",
        run: degree_table,
    },
    Check {
        name: "orthogonal_degrees",
        group: "coxeter",
        run: orthogonal_degrees,
    },
    Check {
        name: "diamond3_not_symmetric",
        group: "domains",
        run: diamond3_not_symmetric,
    },
    Check {
        name: "radial_counterexample",
        group: "domains",
        run: radial_counterexample,
    },
    Check {
        name: "sphere_shell",
        group: "tube",
        run: sphere_shell,
    },
    Check {
        name: "pappus_circle",
        group: "tube",
        run: pappus_circle,
    },
    Check {
        name: "lorentzian_signs",
        group: "lorentz",
        run: lorentzian_signs,
    },
];

/// Names and groups of every check, in run order.
pub fn check_names() -> Vec<(&'static str, &'static str)> {
    CHECKS.iter().map(|c| (c.name, c.group)).collect()
}

/// Runs the checks whose name or group equals `filter` (all when `None`).
pub fn run_checks(filter: Option<&str>) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .filter(|c| filter.is_none_or(|f| c.name == f || c.group == f))
        .map(|c| {
            let start = Instant::now();
            let out = (c.run)();
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match out {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name: c.name,
                group: c.group,
                passed,
                detail,
                seconds,
            }
        })
        .collect()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn square_diamond_moments() -> Outcome {
    let one = [rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1)];
    let f = diamond_fourfold_invariants(&one, &one).map_err(err)?;
    ensure(
        f.mixed_moment == rat(1, 45) && f.pure_moment == rat(4, 15) && f.gap == rat(2, 15),
        format!(
            "mixed {} pure {} gap {}",
            f.mixed_moment, f.pure_moment, f.gap
        ),
    )
}

fn codim_gap() -> Outcome {
    for m in 2..=8i64 {
        let g = diamond_codim_gap(m as usize).map_err(err)?;
        let expect = rat(m - 2, (m - 1) * m * (m + 1) * (m + 2));
        if g.difference != expect {
            return Err(format!("m={m}: got {}, expected {expect}", g.difference));
        }
    }
    Ok("difference (m-2)/((m-1)m(m+1)(m+2)) for m = 2..8".into())
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn identity_case() -> Outcome {
    for n in 1..=6usize {
        for m in 1..=5usize {
            let mut h = vec![Mat::from_fn(n, |i, j| {
                if i == j {
                    rat(1, 1)
                } else {
                    Rat::zero()
                }
            })];
            h.extend((1..m).map(|_| Mat::from_fn(n, |_, _| Rat::zero())));
            let det = integrand_poly(&h, &vec![1.0; m]).map_err(err)?;
            // O(1) = {1, -1}
            let coeff = |d: u32| -> Result<Rat, String> {
                if m == 1 {
                    let signs = [Mat::identity(1), Mat::from_fn(1, |_, _| rat(-1, 1))];
                    Ok(average_group(&det, &signs)
                        .map_err(err)?
                        .coeff(&MultiIndex::new(vec![d])))
                } else {
                    Ok(average_orthogonal(&det).map_err(err)?.coeff(d))
                }
            };
            for d in 0..=n as u32 {
                let got = coeff(d)?;
                let expect = if d % 2 == 1 {
                    Rat::zero()
                } else {
                    Rat::new(
                        double_factorial(d as i64 - 1) * binomial(n as i64, d as i64),
                        rising_even_product(m, d),
                    )
                };
                if got != expect {
                    return Err(format!("n={n} m={m} d={d}: {got} vs {expect}"));
                }
            }
        }
    }
    Ok("exact for n <= 6, m <= 5".into())
}

const DEGREES: &[(GroupType, &[u32])] = &[
    (GroupType::A(2), &[2, 3]),
    (GroupType::A(3), &[2, 3, 4]),
    (GroupType::A(4), &[2, 3, 4, 5]),
    (GroupType::B(2), &[2, 4]),
    (GroupType::B(3), &[2, 4, 6]),
    (GroupType::B(4), &[2, 4, 6, 8]),
    (GroupType::D(4), &[2, 4, 4, 6]),
    (GroupType::D(5), &[2, 4, 5, 6, 8]),
    (GroupType::E6, &[2, 5, 6, 8, 9, 12]),
    (GroupType::E7, &[2, 6, 8, 10, 12, 14, 18]),
    (GroupType::E8, &[2, 8, 12, 14, 18, 20, 24, 30]),
    (GroupType::F4, &[2, 6, 8, 12]),
    (GroupType::H3, &[2, 6, 10]),
    (GroupType::H4, &[2, 12, 20, 30]),
    (GroupType::I2(7), &[2, 7]),
];

fn degree_table() -> Outcome {
    for (kind, degrees) in DEGREES {
        let mut got = kind.degrees();
        got.sort_unstable();
        if got != *degrees {
            return Err(format!("{kind}: {got:?} vs {degrees:?}"));
        }
        let order: u64 = degrees.iter().map(|&d| d as u64).product();
        if kind.order() != order {
            return Err(format!(
                "{kind}: order {} vs degree product {order}",
                kind.order()
            ));
        }
    }
    Ok(format!("{} types", DEGREES.len()))
}

/// Groups whose orthogonal degree is computed from the enumerated elements.
pub const ENUMERATED_GROUPS: &[GroupType] = &[
    GroupType::A(2),
    GroupType::A(3),
    GroupType::A(4),
    GroupType::B(2),
    GroupType::B(3),
    GroupType::B(4),
    GroupType::D(4),
    GroupType::I2(5),
    GroupType::I2(6),
    GroupType::I2(7),
    GroupType::I2(8),
    GroupType::H3,
    GroupType::F4,
    GroupType::H4,
];

fn orthogonal_degrees() -> Outcome {
    let mut parts = Vec::new();
    for &kind in ENUMERATED_GROUPS {
        let g = build_group(kind).map_err(err)?;
        let d2 = kind.degrees()[1];
        if g.order() as u64 != kind.order() {
            return Err(format!(
                "{kind}: enumerated {} elements, expected {}",
                g.order(),
                kind.order()
            ));
        }
        let n = g.orthogonal_of_degree(d2 + 1).map_err(err)?;
        if n != d2 - 1 {
            return Err(format!(
                "{kind}: orthogonal of degree {n}, expected {}",
                d2 - 1
            ));
        }
        parts.push(format!("{kind}:{n}"));
    }
    Ok(parts.join(" "))
}

fn diamond3_not_symmetric() -> Outcome {
    let r = symmetric_of_degree(&Domain::Diamond { m: 3 }, 2, 1e-10).map_err(err)?;
    ensure(!r.symmetric, format!("defect {:e}", r.max_defect))
}

/// The planar domain with `n = 2, p = 3, q = 16` and a single `q` mode.
pub fn radial_counterexample_domain() -> Result<Domain, String> {
    let b = TrigSeries::new(1.0, vec![(16, 0.2, 0.1)]);
    build_radial_counterexample(2, 3, 16, &b).map_err(err)
}

fn radial_counterexample() -> Outcome {
    let d = radial_counterexample_domain()?;
    let r = symmetric_of_degree(&d, 2, 1e-10).map_err(err)?;
    ensure(r.symmetric, format!("max defect {:e}", r.max_defect))
}

fn sphere_shell() -> Outcome {
    let big_r = 2.0;
    let m = Manifold::euclidean(ManifoldSpec::Sphere {
        radius: big_r,
        dim: 2,
    })
    .map_err(err)?;
    let d = Domain::Cube { m: 1 };
    let radii = [0.05, 0.1, 0.2];
    let opts = TubeOptions::default();
    let ext = tube_volume_extrinsic(&m, &d, &radii, &opts).map_err(err)?;
    let int = tube_volume_intrinsic(&m, &d, &radii, &opts).map_err(err)?;
    let mut worst: f64 = 0.0;
    for (k, a) in radii.iter().enumerate() {
        let exact = 4.0 * PI / 3.0 * ((big_r + a).powi(3) - (big_r - a).powi(3));
        worst = worst
            .max((ext.volumes[k] - exact).abs() / exact)
            .max((int.path.volumes[k] - exact).abs() / exact);
    }
    let k2 = int.lipschitz_killing[1].1;
    let k2_err = (k2 - 4.0 * PI).abs() / (4.0 * PI);
    ensure(
        worst < 1e-9 && k2_err < 1e-9,
        format!("max relative error {worst:e}, k2 error {k2_err:e}"),
    )
}

fn pappus_circle() -> Outcome {
    let big_r = 2.0;
    let a = 0.2;
    let m = Manifold::euclidean(ManifoldSpec::Circle {
        radius: big_r,
        ambient: 3,
    })
    .map_err(err)?;
    let d = Domain::RegularPolygon { k: 5 };
    let v = tube_volume_extrinsic(&m, &d, &[a], &TubeOptions::default())
        .map_err(err)?
        .volumes[0];
    let exact = 2.0 * PI * big_r * d.volume().map_err(err)? * a * a;
    let rel = (v - exact).abs() / exact;
    ensure(rel < 1e-8, format!("relative error {rel:e}"))
}

fn lorentzian_signs() -> Outcome {
    // spacelike graph in R^{2,1}: each k_d enters with (-1)^{d/2}
    let spec = ManifoldSpec::Graph {
        heights: vec![vec![(2, 0, 0.2), (1, 1, 0.1), (0, 2, -0.15)]],
        half_width: 1.0,
    };
    let m = Manifold::new(spec, Signature::Lorentzian).map_err(err)?;
    let d = Domain::Cube { m: 1 };
    let int = tube_volume_intrinsic(&m, &d, &[0.1], &TubeOptions::default()).map_err(err)?;
    let ext = tube_volume_extrinsic(&m, &d, &[0.1], &TubeOptions::default()).map_err(err)?;
    let k2 = int.lipschitz_killing[1].1;
    let expect = -2.0 * k2 / 3.0;
    let diff = (ext.coefficients[2] - expect).abs();
    ensure(
        int.alternating_sign && diff < 1e-9 && k2.abs() > 1e-3,
        format!(
            "a^3 coefficient {:e} vs -2 k2/3 = {expect:e}",
            ext.coefficients[2]
        ),
    )
}
