//! Cross-section domains: moment tables, membership, and the degree-n
//! moment symmetry test.

mod moments;
mod spec;
mod symmetry;
mod trig;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use moments::{
    diamond_moment_ratio, moments, radial_moment, Moment, MomentTable, MAX_MOMENT_DEGREE,
};
pub use spec::DomainSpec;
pub use symmetry::{
    build_radial_counterexample, symmetric_of_degree, SymmetryReport, MAX_SYMMETRY_DEGREE,
};
pub use trig::TrigSeries;

/// Points within this distance of the boundary count as members.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("moment degree {0} exceeds the supported maximum {max}", max = MAX_MOMENT_DEGREE)]
    DegreeTooLarge(u32),
    #[error("radial moments need an even degree, got {0}")]
    OddRadialDegree(u32),
    #[error("point has {found} coordinates, domain dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid domain: {0}")]
    Invalid(String),
    #[error("radial profile must be positive; minimum on the grid is {0}")]
    NonPositiveProfile(f64),
    #[error("counterexample constraint violated: {0}")]
    Constraint(String),
}

/// Membership predicate for [`Domain::MonteCarlo`].
pub type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Domain known only through a membership test; moments by rejection sampling.
#[derive(Clone)]
pub struct SampledDomain {
    pub m: usize,
    pub label: String,
    pub bounding_radius: f64,
    pub samples: u64,
    pub seed: u64,
    pub predicate: Predicate,
}

impl fmt::Debug for SampledDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledDomain")
            .field("m", &self.m)
            .field("label", &self.label)
            .field("bounding_radius", &self.bounding_radius)
            .field("samples", &self.samples)
            .field("seed", &self.seed)
            .finish()
    }
}

/// Compact cross-section domain around the origin of `R^m`.
#[derive(Clone, Debug)]
pub enum Domain {
    /// Unit ball.
    Ball {
        m: usize,
    },
    /// `[-1, 1]^m`.
    Cube {
        m: usize,
    },
    /// Unit ball of the 1-norm.
    CrossPolytope {
        m: usize,
    },
    /// Convex hull of the unit (m-1)-ball in `t_m = 0` and `±e_m`.
    Diamond {
        m: usize,
    },
    /// Regular k-gon with circumradius 1 and a vertex on the positive t1 axis.
    RegularPolygon {
        k: usize,
    },
    /// Half unit ball `t1 <= 0` glued to a cone with apex `(b, 0, .., 0)`.
    ConeBall {
        m: usize,
        b: f64,
    },
    /// Planar star-shaped domain `0 <= r <= a(phi)`.
    Radial2D(TrigSeries),
    MonteCarlo(SampledDomain),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Ball { m }
            | Domain::Cube { m }
            | Domain::CrossPolytope { m }
            | Domain::Diamond { m }
            | Domain::ConeBall { m, .. } => *m,
            Domain::RegularPolygon { .. } | Domain::Radial2D(_) => 2,
            Domain::MonteCarlo(s) => s.m,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Domain::Ball { m } => format!("ball(m={m})"),
            Domain::Cube { m } => format!("cube(m={m})"),
            Domain::CrossPolytope { m } => format!("cross_polytope(m={m})"),
            Domain::Diamond { m } => format!("diamond(m={m})"),
            Domain::RegularPolygon { k } => format!("regular_polygon(k={k})"),
            Domain::ConeBall { m, b } => format!("cone_ball(m={m}, b={b})"),
            Domain::Radial2D(a) => format!("radial2d(max_mode={})", a.max_mode()),
            Domain::MonteCarlo(s) => format!("monte_carlo({})", s.label),
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let bad = |s: String| Err(DomainError::Invalid(s));
        match self {
            Domain::Ball { m }
            | Domain::Cube { m }
            | Domain::CrossPolytope { m }
            | Domain::Diamond { m }
                if *m == 0 =>
            {
                bad("dimension m must be at least 1".into())
            }
            Domain::RegularPolygon { k } if *k < 3 => bad(format!("polygon needs k >= 3, got {k}")),
            Domain::ConeBall { m, b } => {
                if *m == 0 {
                    bad("dimension m must be at least 1".into())
                } else if !(b.is_finite() && *b > 0.0) {
                    bad(format!("cone apex b must be positive, got {b}"))
                } else {
                    Ok(())
                }
            }
            Domain::Radial2D(a) => {
                let (lo, _) = a.range_on_grid(radial_grid(a, 0));
                if lo <= 0.0 || !lo.is_finite() {
                    Err(DomainError::NonPositiveProfile(lo))
                } else {
                    Ok(())
                }
            }
            Domain::MonteCarlo(s) => {
                if s.m == 0 {
                    bad("dimension m must be at least 1".into())
                } else if !(s.bounding_radius.is_finite() && s.bounding_radius > 0.0) {
                    bad(format!(
                        "bounding radius must be positive, got {}",
                        s.bounding_radius
                    ))
                } else if s.samples == 0 {
                    bad("sample count must be positive".into())
                } else if !(s.predicate)(&vec![0.0; s.m]) {
                    bad("origin is not inside the sampled domain".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Radius of the smallest origin-centred ball containing the domain.
    pub fn circumradius(&self) -> f64 {
        match self {
            Domain::Ball { .. }
            | Domain::CrossPolytope { .. }
            | Domain::Diamond { .. }
            | Domain::RegularPolygon { .. } => 1.0,
            Domain::Cube { m } => (*m as f64).sqrt(),
            Domain::ConeBall { b, .. } => b.max(1.0),
            Domain::Radial2D(a) => a.range_on_grid(radial_grid(a, 0)).1,
            Domain::MonteCarlo(s) => s.bounding_radius,
        }
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        match self {
            Domain::Ball { .. }
            | Domain::Cube { .. }
            | Domain::CrossPolytope { .. }
            | Domain::Diamond { .. } => true,
            Domain::RegularPolygon { k } => k % 2 == 0,
            Domain::ConeBall { m, b } => *m == 1 && *b == 1.0,
            Domain::Radial2D(a) => a.modes.iter().all(|&(k, _, _)| k % 2 == 0),
            Domain::MonteCarlo(_) => false,
        }
    }

    /// Closed point-in-domain test; boundary points are members.
    pub fn contains(&self, t: &[f64]) -> Result<bool, DomainError> {
        let m = self.dim();
        if t.len() != m {
            return Err(DomainError::DimensionMismatch {
                expected: m,
                found: t.len(),
            });
        }
        let tol = BOUNDARY_TOL;
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(match self {
            Domain::Ball { .. } => norm(t) <= 1.0 + tol,
            Domain::Cube { .. } => t.iter().all(|x| x.abs() <= 1.0 + tol),
            Domain::CrossPolytope { .. } => t.iter().map(|x| x.abs()).sum::<f64>() <= 1.0 + tol,
            Domain::Diamond { m } => {
                let (rest, last) = t.split_at(m - 1);
                norm(rest) <= 1.0 - last[0].abs() + tol
            }
            Domain::RegularPolygon { k } => {
                let v = polygon_vertices(*k);
                (0..*k).all(|j| {
                    let (a, b) = (v[j], v[(j + 1) % k]);
                    let cross = (b[0] - a[0]) * (t[1] - a[1]) - (b[1] - a[1]) * (t[0] - a[0]);
                    cross >= -tol
                })
            }
            Domain::ConeBall { b, .. } => {
                if t[0] <= 0.0 {
                    norm(t) <= 1.0 + tol
                } else {
                    t[0] <= b + tol && norm(&t[1..]) <= 1.0 - t[0] / b + tol
                }
            }
            Domain::Radial2D(a) => {
                let r = norm(t);
                r == 0.0 || r <= a.eval(t[1].atan2(t[0])) + tol
            }
            Domain::MonteCarlo(s) => (s.predicate)(t),
        })
    }

    pub fn volume(&self) -> Result<f64, DomainError> {
        Ok(moments(self, 0)?
            .get(&crate::poly::MultiIndex::zero(self.dim()))
            .value())
    }
}

/// Vertices of the regular k-gon, counter-clockwise from `(1, 0)`.
pub fn polygon_vertices(k: usize) -> Vec<[f64; 2]> {
    (0..k)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / k as f64;
            [phi.cos(), phi.sin()]
        })
        .collect()
}

/// Surface area `omega_m` of the unit sphere `S^{m-1}` in `R^m`.
pub fn sphere_area(m: usize) -> f64 {
    match m {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(m - 2) / (m - 2) as f64,
    }
}

/// Volume `Omega_m` of the unit ball in `R^m`.
pub fn ball_volume(m: usize) -> f64 {
    if m == 0 {
        1.0
    } else {
        sphere_area(m) / m as f64
    }
}

/// Trapezoid node count for radial moments up to degree `max_degree`.
pub(crate) fn radial_grid(a: &TrigSeries, max_degree: u32) -> usize {
    (8 * (max_degree as usize + 2) * a.max_mode().max(1) as usize).max(256)
}
