use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{DiffGeoError, Embedding, Jet, Signature, D3};
use crate::quadrature::{Axis, Chart};

/// `coeff * x^i * y^j`, written `[i, j, coeff]` in JSON.
pub type HeightTerm = (u32, u32, f64);

fn default_ambient() -> usize {
    3
}

fn default_dim() -> usize {
    2
}

fn default_half_width() -> f64 {
    1.0
}

fn default_angle() -> f64 {
    2.0 * PI
}

fn default_codim() -> usize {
    1
}

/// Built-in embeddings with analytic derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldSpec {
    /// Circle of the given radius in the `x1 x2` plane of `R^ambient`.
    Circle {
        radius: f64,
        #[serde(default = "default_ambient")]
        ambient: usize,
    },
    /// Round sphere `S^dim` of the given radius in `R^{dim+1}`.
    Sphere {
        radius: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// Torus of revolution in `R^3`.
    Torus { major: f64, minor: f64 },
    /// `(r1 (1 + w cos v) cos u, r1 (1 + w cos v) sin u, r2 cos v, r2 sin v)` in `R^4`;
    /// flat when `warp = 0`.
    CliffordTorus {
        r1: f64,
        r2: f64,
        #[serde(default)]
        warp: f64,
    },
    /// Helix `(R cos s, R sin s, c s)` for `0 <= s <= length`.
    Helix {
        radius: f64,
        pitch: f64,
        length: f64,
    },
    /// Helicoid `(v cos u, v sin u, c u)`, `0 <= u <= angle`, `|v| <= width`.
    Helicoid {
        pitch: f64,
        width: f64,
        #[serde(default = "default_angle")]
        angle: f64,
    },
    /// Graph `(x, y, f_1(x, y), .., f_m(x, y))` over `[-w, w]^2`. With a
    /// Lorentzian signature the last height is the timelike coordinate.
    Graph {
        heights: Vec<Vec<HeightTerm>>,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
    /// Flat square `[-w, w]^2` in `R^{2+codim}`.
    Plane {
        #[serde(default = "default_codim")]
        codim: usize,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
}

impl ManifoldSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ManifoldSpec::Circle { .. } => "circle",
            ManifoldSpec::Sphere { .. } => "sphere",
            ManifoldSpec::Torus { .. } => "torus",
            ManifoldSpec::CliffordTorus { .. } => "clifford_torus",
            ManifoldSpec::Helix { .. } => "helix",
            ManifoldSpec::Helicoid { .. } => "helicoid",
            ManifoldSpec::Graph { .. } => "graph",
            ManifoldSpec::Plane { .. } => "plane",
        }
    }

    fn validate(&self) -> Result<(), DiffGeoError> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(DiffGeoError::Invalid(format!(
                    "manifold.{name} must be positive, got {v}"
                )))
            }
        };
        match self {
            ManifoldSpec::Circle { radius, ambient } => {
                pos("radius", *radius)?;
                if *ambient < 2 {
                    return Err(DiffGeoError::Invalid(
                        "manifold.ambient must be at least 2".into(),
                    ));
                }
            }
            ManifoldSpec::Sphere { radius, dim } => {
                pos("radius", *radius)?;
                if !(1..=4).contains(dim) {
                    return Err(DiffGeoError::Invalid(format!(
                        "manifold.dim must be 1..=4, got {dim}"
                    )));
                }
            }
            ManifoldSpec::Torus { major, minor } => {
                pos("major", *major)?;
                pos("minor", *minor)?;
                if minor >= major {
                    return Err(DiffGeoError::Invalid(
                        "manifold.minor must be below manifold.major".into(),
                    ));
                }
            }
            ManifoldSpec::CliffordTorus { r1, r2, warp } => {
                pos("r1", *r1)?;
                pos("r2", *r2)?;
                if warp.abs() >= 1.0 {
                    return Err(DiffGeoError::Invalid(
                        "manifold.warp must satisfy |warp| < 1".into(),
                    ));
                }
            }
            ManifoldSpec::Helix {
                radius,
                pitch,
                length,
            } => {
                pos("radius", *radius)?;
                pos("pitch", *pitch)?;
                pos("length", *length)?;
            }
            ManifoldSpec::Helicoid {
                pitch,
                width,
                angle,
            } => {
                pos("pitch", *pitch)?;
                pos("width", *width)?;
                pos("angle", *angle)?;
            }
            ManifoldSpec::Graph {
                heights,
                half_width,
            } => {
                pos("half_width", *half_width)?;
                if heights.is_empty() {
                    return Err(DiffGeoError::Invalid(
                        "manifold.heights must not be empty".into(),
                    ));
                }
            }
            ManifoldSpec::Plane { codim, half_width } => {
                pos("half_width", *half_width)?;
                if *codim == 0 {
                    return Err(DiffGeoError::Invalid(
                        "manifold.codim must be at least 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A built-in embedding together with its ambient signature.
#[derive(Clone, Debug)]
pub struct Manifold {
    pub spec: ManifoldSpec,
    signature: Signature,
}

impl Manifold {
    pub fn new(spec: ManifoldSpec, signature: Signature) -> Result<Self, DiffGeoError> {
        spec.validate()?;
        if signature == Signature::Lorentzian
            && !matches!(
                spec,
                ManifoldSpec::Graph { .. } | ManifoldSpec::Plane { .. }
            )
        {
            return Err(DiffGeoError::Invalid(format!(
                "lorentzian signature is supported for graph and plane manifolds, not {}",
                spec.kind()
            )));
        }
        Ok(Manifold { spec, signature })
    }

    pub fn euclidean(spec: ManifoldSpec) -> Result<Self, DiffGeoError> {
        Self::new(spec, Signature::Euclidean)
    }

    /// `r(u)` with derivatives carried along.
    fn eval(&self, u: &[D3]) -> Vec<D3> {
        let n = u.len();
        let c = |v: f64| D3::constant(n, v);
        match &self.spec {
            ManifoldSpec::Circle { radius, ambient } => {
                let mut x = vec![&u[0].cos() * *radius, &u[0].sin() * *radius];
                x.resize(*ambient, c(0.0));
                x
            }
            ManifoldSpec::Sphere { radius, .. } => {
                // x_1 = cos th_1, x_k = sin th_1 .. sin th_{k-1} cos th_k, last uses phi
                let mut x = Vec::with_capacity(n + 1);
                let mut prod = c(*radius);
                for ui in u.iter() {
                    x.push(&prod * &ui.cos());
                    prod = &prod * &ui.sin();
                }
                x.push(prod);
                x
            }
            ManifoldSpec::Torus { major, minor } => {
                let ring = &(&u[1].cos() * *minor) + *major;
                vec![
                    &ring * &u[0].cos(),
                    &ring * &u[0].sin(),
                    &u[1].sin() * *minor,
                ]
            }
            ManifoldSpec::CliffordTorus { r1, r2, warp } => {
                let ring = &(&(&u[1].cos() * *warp) + 1.0) * *r1;
                vec![
                    &ring * &u[0].cos(),
                    &ring * &u[0].sin(),
                    &u[1].cos() * *r2,
                    &u[1].sin() * *r2,
                ]
            }
            ManifoldSpec::Helix { radius, pitch, .. } => {
                vec![&u[0].cos() * *radius, &u[0].sin() * *radius, &u[0] * *pitch]
            }
            ManifoldSpec::Helicoid { pitch, .. } => {
                vec![&u[1] * &u[0].cos(), &u[1] * &u[0].sin(), &u[0] * *pitch]
            }
            ManifoldSpec::Graph { heights, .. } => {
                let mut x = vec![u[0].clone(), u[1].clone()];
                for f in heights {
                    let mut acc = c(0.0);
                    for &(i, j, coeff) in f {
                        let term = &(&u[0].powi(i as i32) * &u[1].powi(j as i32)) * coeff;
                        acc = &acc + &term;
                    }
                    x.push(acc);
                }
                x
            }
            ManifoldSpec::Plane { codim, .. } => {
                let mut x = vec![u[0].clone(), u[1].clone()];
                x.resize(2 + codim, c(0.0));
                x
            }
        }
    }

    pub fn position(&self, u: &[f64]) -> Vec<f64> {
        self.eval(&D3::vars(u)).iter().map(|x| x.v).collect()
    }
}

impl Embedding for Manifold {
    fn label(&self) -> String {
        format!("{}({})", self.spec.kind(), self.signature.as_str())
    }

    fn intrinsic_dim(&self) -> usize {
        match &self.spec {
            ManifoldSpec::Circle { .. } | ManifoldSpec::Helix { .. } => 1,
            ManifoldSpec::Sphere { dim, .. } => *dim,
            _ => 2,
        }
    }

    fn ambient_dim(&self) -> usize {
        match &self.spec {
            ManifoldSpec::Circle { ambient, .. } => *ambient,
            ManifoldSpec::Sphere { dim, .. } => dim + 1,
            ManifoldSpec::Torus { .. }
            | ManifoldSpec::Helix { .. }
            | ManifoldSpec::Helicoid { .. } => 3,
            ManifoldSpec::CliffordTorus { .. } => 4,
            ManifoldSpec::Graph { heights, .. } => 2 + heights.len(),
            ManifoldSpec::Plane { codim, .. } => 2 + codim,
        }
    }

    fn signature(&self) -> Signature {
        self.signature
    }

    fn chart(&self) -> Chart {
        match &self.spec {
            ManifoldSpec::Circle { .. } => Chart::new(vec![Axis::circle()]),
            ManifoldSpec::Sphere { dim, .. } => {
                let mut axes = vec![Axis::interval(0.0, PI); dim - 1];
                axes.push(Axis::circle());
                Chart::new(axes)
            }
            ManifoldSpec::Torus { .. } | ManifoldSpec::CliffordTorus { .. } => {
                Chart::new(vec![Axis::circle(), Axis::circle()])
            }
            ManifoldSpec::Helix { length, .. } => Chart::new(vec![Axis::interval(0.0, *length)]),
            ManifoldSpec::Helicoid { width, angle, .. } => Chart::new(vec![
                Axis::interval(0.0, *angle),
                Axis::interval(-width, *width),
            ]),
            ManifoldSpec::Graph { half_width, .. } | ManifoldSpec::Plane { half_width, .. } => {
                Chart::new(vec![Axis::interval(-half_width, *half_width); 2])
            }
        }
    }

    fn jet(&self, u: &[f64]) -> Jet {
        Jet::from_d3(&self.eval(&D3::vars(u)), u.len())
    }

    fn normal_seeds(&self, u: &[f64]) -> Option<Vec<Vec<f64>>> {
        let e = |dim: usize, i: usize| {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            v
        };
        match &self.spec {
            ManifoldSpec::Circle { ambient, .. } => {
                let mut radial = vec![u[0].cos(), u[0].sin()];
                radial.resize(*ambient, 0.0);
                let mut s = vec![radial];
                s.extend((2..*ambient).map(|i| e(*ambient, i)));
                Some(s)
            }
            ManifoldSpec::Sphere { .. } => Some(vec![self.position(u)]),
            ManifoldSpec::Torus { .. } => {
                let (su, cu) = u[0].sin_cos();
                let (sv, cv) = u[1].sin_cos();
                Some(vec![vec![cv * cu, cv * su, sv]])
            }
            ManifoldSpec::CliffordTorus { .. } => {
                let (su, cu) = u[0].sin_cos();
                let (sv, cv) = u[1].sin_cos();
                Some(vec![vec![cu, su, 0.0, 0.0], vec![0.0, 0.0, cv, sv]])
            }
            ManifoldSpec::Helix { radius, pitch, .. } => {
                let (s, c) = u[0].sin_cos();
                Some(vec![
                    vec![-c, -s, 0.0],
                    vec![pitch * s, -pitch * c, *radius],
                ])
            }
            ManifoldSpec::Helicoid { pitch, .. } => {
                let (s, c) = u[0].sin_cos();
                Some(vec![vec![pitch * s, -pitch * c, u[1]]])
            }
            ManifoldSpec::Graph { .. } | ManifoldSpec::Plane { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_positions_lie_on_sphere() {
        for dim in 1..=4usize {
            let m = Manifold::euclidean(ManifoldSpec::Sphere { radius: 2.0, dim }).unwrap();
            let u: Vec<f64> = (0..dim).map(|i| 0.3 + 0.4 * i as f64).collect();
            let x = m.position(&u);
            assert_eq!(x.len(), dim + 1);
            let r: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((r - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn spec_json() {
        let s: ManifoldSpec =
            serde_json::from_str(r#"{"kind": "torus", "major": 3, "minor": 1}"#).unwrap();
        assert_eq!(
            s,
            ManifoldSpec::Torus {
                major: 3.0,
                minor: 1.0
            }
        );
        let g: ManifoldSpec =
            serde_json::from_str(r#"{"kind": "graph", "heights": [[[2, 0, 0.5], [0, 2, 0.5]]]}"#)
                .unwrap();
        assert!(matches!(g, ManifoldSpec::Graph { half_width, .. } if half_width == 1.0));
        assert!(serde_json::from_str::<ManifoldSpec>(r#"{"kind": "torus", "major": 3}"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(Manifold::euclidean(ManifoldSpec::Torus {
            major: 1.0,
            minor: 2.0
        })
        .is_err());
        let sphere = ManifoldSpec::Sphere {
            radius: 1.0,
            dim: 2,
        };
        assert!(Manifold::new(sphere, Signature::Lorentzian).is_err());
    }
}
