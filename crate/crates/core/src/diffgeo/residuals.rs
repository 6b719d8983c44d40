use nalgebra::DMatrix;
use serde::Serialize;

use super::{eta_dot, DiffGeoError, Embedding, Evaluator, HdPlan, NodeGeometry};
use crate::par;
use crate::quadrature::{tensor_grid, QuadratureSpec};

/// Nodes at which Codazzi residuals are sampled in a report.
const CODAZZI_SAMPLES: usize = 512;

/// Max Codazzi residual at `u`, with parameter derivatives of the second
/// fundamental form and of the normal frame from a five-point stencil.
pub fn codazzi_residual(ev: &Evaluator<'_>, node: &NodeGeometry) -> Result<f64, DiffGeoError> {
    let emb = ev.embedding();
    let chart = emb.chart();
    let n = node.n();
    let m = node.frame.len();
    let eta = ev.eta();
    let u = &node.u;

    // dh[i][p][(j, k)] = d_i h_jk^p and dn[i][q] = d_i n_q
    let mut dh: Vec<Vec<DMatrix<f64>>> = Vec::with_capacity(n);
    let mut dn: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n);
    for i in 0..n {
        let axis = &chart.axes[i];
        let mut step = 1e-3 * axis.length();
        if !axis.periodic {
            step = step.min((u[i] - axis.lo).min(axis.hi - u[i]) / 2.0);
        }
        let mut samples = Vec::with_capacity(4);
        for s in [2.0, 1.0, -1.0, -2.0] {
            let mut v = u.clone();
            v[i] += s * step;
            let (_, frame, h) = ev.frame_and_h(&v)?;
            samples.push((frame, h));
        }
        let w = [-1.0, 8.0, -8.0, 1.0].map(|c| c / (12.0 * step));
        dh.push(
            (0..m)
                .map(|p| {
                    DMatrix::from_fn(n, n, |j, k| {
                        (0..4).map(|t| w[t] * samples[t].1[p][(j, k)]).sum()
                    })
                })
                .collect(),
        );
        dn.push(
            (0..m)
                .map(|q| {
                    (0..emb.ambient_dim())
                        .map(|a| (0..4).map(|t| w[t] * samples[t].0[q][a]).sum())
                        .collect()
                })
                .collect(),
        );
    }
    // omega[i][(p, q)] = eta_pp <d_i n_q, n_p>
    let omega: Vec<DMatrix<f64>> = (0..n)
        .map(|i| {
            DMatrix::from_fn(m, m, |p, q| {
                node.eta_normal[p] * eta_dot(eta, &dn[i][q], &node.frame[p])
            })
        })
        .collect();

    let h = &node.h;
    let mut worst: f64 = 0.0;
    for p in 0..m {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = dh[i][p][(j, k)] - dh[j][p][(i, k)];
                    for l in 0..n {
                        v +=
                            node.gamma(j, k, l) * h[p][(i, l)] - node.gamma(i, k, l) * h[p][(j, l)];
                    }
                    for q in 0..m {
                        v += h[q][(j, k)] * omega[i][(p, q)] - h[q][(i, k)] * omega[j][(p, q)];
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Summary of the curvature of an embedding over its quadrature grid.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub manifold: String,
    pub intrinsic_dim: usize,
    pub codim: usize,
    pub nodes: usize,
    /// `integral of sqrt(det g)`.
    pub volume: f64,
    /// Intrinsic Riemann tensor against the Gauss-equation tensor.
    pub max_gauss_residual: f64,
    pub max_codazzi_residual: f64,
    pub codazzi_nodes: usize,
    pub max_frame_defect: f64,
    /// `(d, integral of H_d)` for even `d <= n`, from the intrinsic tensor.
    pub lipschitz_killing: Vec<(usize, f64)>,
    pub clamped: bool,
}

pub fn curvature_report(
    emb: &dyn Embedding,
    spec: &QuadratureSpec,
    rotation: Option<DMatrix<f64>>,
) -> Result<CurvatureReport, DiffGeoError> {
    spec.validate()?;
    let ev = Evaluator::new(emb, rotation)?;
    let grid = tensor_grid(&emb.chart(), spec);
    let n = emb.intrinsic_dim();
    let plans: Vec<HdPlan> = (0..=n)
        .step_by(2)
        .map(HdPlan::new)
        .collect::<Result<_, _>>()?;
    let stride = grid.len().div_ceil(CODAZZI_SAMPLES).max(1);
    let indices: Vec<usize> = (0..grid.len()).collect();

    struct Row {
        dvol: f64,
        gauss: f64,
        codazzi: Option<f64>,
        frame: f64,
        hd: Vec<f64>,
        clamped: bool,
    }
    let rows: Vec<Result<Row, DiffGeoError>> = par::map_slice(&indices, |&idx| {
        let (u, w) = &grid[idx];
        let node = ev.node(u)?;
        let codazzi = if idx % stride == 0 {
            Some(codazzi_residual(&ev, &node)?)
        } else {
            None
        };
        Ok(Row {
            dvol: w * node.sqrt_det_g,
            gauss: node.riemann.max_diff(&node.riemann_gauss),
            codazzi,
            frame: node.frame_defect(ev.eta()),
            hd: plans.iter().map(|p| p.contract(&node.riemann)).collect(),
            clamped: node.clamped,
        })
    });

    let mut report = CurvatureReport {
        manifold: emb.label(),
        intrinsic_dim: n,
        codim: emb.codim(),
        nodes: grid.len(),
        volume: 0.0,
        max_gauss_residual: 0.0,
        max_codazzi_residual: 0.0,
        codazzi_nodes: 0,
        max_frame_defect: 0.0,
        lipschitz_killing: plans.iter().map(|p| (p.degree(), 0.0)).collect(),
        clamped: false,
    };
    for row in rows {
        let row = row?;
        report.volume += row.dvol;
        report.max_gauss_residual = report.max_gauss_residual.max(row.gauss);
        if let Some(c) = row.codazzi {
            report.max_codazzi_residual = report.max_codazzi_residual.max(c);
            report.codazzi_nodes += 1;
        }
        report.max_frame_defect = report.max_frame_defect.max(row.frame);
        for (slot, v) in report.lipschitz_killing.iter_mut().zip(&row.hd) {
            slot.1 += row.dvol * v;
        }
        report.clamped |= row.clamped;
    }
    Ok(report)
}
