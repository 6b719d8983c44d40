//! Geometry of embedded submanifolds: normal frames, fundamental forms,
//! Christoffel symbols, Riemann curvature and the Lipschitz-Killing contraction.

mod fd;
mod frame;
mod hd;
mod node;
mod residuals;
mod taylor;
mod zoo;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{Chart, QuadratureError};

pub use fd::{FiniteDifferenceEmbedding, PositionFn};
pub use frame::{normal_frame, reference_normals};
pub use hd::{contract_hd, CurvatureTensor, HdPlan};
pub use node::{Evaluator, NodeGeometry};
pub use residuals::{codazzi_residual, curvature_report, CurvatureReport};
pub use taylor::D3;
pub use zoo::{HeightTerm, Manifold, ManifoldSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffGeoError {
    #[error("frame breakdown at u = {u:?}: {detail}")]
    FrameBreakdown { u: Vec<f64>, detail: String },
    #[error("induced metric is not positive definite (not spacelike/immersed) at u = {u:?}")]
    NotSpacelike { u: Vec<f64> },
    #[error("H_d is only defined for even d, got {0}")]
    OddDegree(usize),
    #[error("frame rotation must be a {m}x{m} matrix preserving the normal signature (defect {defect:e})")]
    BadRotation { m: usize, defect: f64 },
    #[error("invalid manifold: {0}")]
    Invalid(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Metric signature of the ambient space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    #[default]
    Euclidean,
    /// One timelike direction, the last ambient coordinate.
    Lorentzian,
}

impl Signature {
    /// Diagonal of the ambient scalar product.
    pub fn ambient_eta(&self, dim: usize) -> Vec<f64> {
        let mut eta = vec![1.0; dim];
        if *self == Signature::Lorentzian {
            eta[dim - 1] = -1.0;
        }
        eta
    }

    /// Diagonal `eta_pp` of the normal frame; for a spacelike submanifold the
    /// single timelike direction lies in the normal bundle and is put last.
    pub fn normal_eta(&self, m: usize) -> Vec<f64> {
        self.ambient_eta(m)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Signature::Euclidean => "euclidean",
            Signature::Lorentzian => "lorentzian",
        }
    }
}

/// `sum_a eta_a x_a y_a`.
pub fn eta_dot(eta: &[f64], x: &[f64], y: &[f64]) -> f64 {
    eta.iter().zip(x).zip(y).map(|((e, a), b)| e * a * b).sum()
}

/// Position and parameter derivatives of `r` up to third order at one point.
/// Indices: `d1[i][a]`, `d2[i][j][a]`, `d3[i][j][k][a]` with `a` ambient.
#[derive(Clone, Debug)]
pub struct Jet {
    pub r: Vec<f64>,
    pub d1: Vec<Vec<f64>>,
    pub d2: Vec<Vec<Vec<f64>>>,
    pub d3: Vec<Vec<Vec<Vec<f64>>>>,
    /// Set when a finite-difference stencil had to be shrunk near the box edge.
    pub clamped: bool,
}

impl Jet {
    pub fn from_d3(x: &[D3], n: usize) -> Jet {
        let big = x.len();
        Jet {
            r: x.iter().map(|c| c.v).collect(),
            d1: (0..n)
                .map(|i| (0..big).map(|a| x[a].d1(i)).collect())
                .collect(),
            d2: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..big).map(|a| x[a].d2(i, j)).collect())
                        .collect()
                })
                .collect(),
            d3: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n)
                                .map(|k| (0..big).map(|a| x[a].d3(i, j, k)).collect())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
            clamped: false,
        }
    }
}

/// A parametrized submanifold `r: U -> R^{n+m}` over a single chart.
pub trait Embedding: Send + Sync {
    fn label(&self) -> String;
    fn intrinsic_dim(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    fn signature(&self) -> Signature;
    fn chart(&self) -> Chart;
    fn jet(&self, u: &[f64]) -> Jet;

    fn codim(&self) -> usize {
        self.ambient_dim() - self.intrinsic_dim()
    }

    /// Ambient vectors spanning the normal space near `u`, in frame order.
    /// `None` anchors the frame to the normal space at the chart center.
    fn normal_seeds(&self, _u: &[f64]) -> Option<Vec<Vec<f64>>> {
        None
    }
}
