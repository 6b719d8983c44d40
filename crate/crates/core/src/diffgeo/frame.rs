use nalgebra::DMatrix;

use super::{eta_dot, DiffGeoError, Embedding, Jet};

/// Relative size below which a projected seed counts as degenerate.
const BREAKDOWN_TOL: f64 = 1e-8;

fn project_off_tangent(jet: &Jet, eta: &[f64], ginv: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let n = jet.d1.len();
    let dots: Vec<f64> = jet.d1.iter().map(|rj| eta_dot(eta, rj, v)).collect();
    let mut out = v.to_vec();
    for i in 0..n {
        let c: f64 = (0..n).map(|j| ginv[(i, j)] * dots[j]).sum();
        for (o, ri) in out.iter_mut().zip(&jet.d1[i]) {
            *o -= c * ri;
        }
    }
    out
}

/// Gram-Schmidt of `seeds` against the tangent space and each other, in the
/// ambient scalar product, producing `n_p . n_q = eta_pq`.
pub fn normal_frame(
    jet: &Jet,
    eta: &[f64],
    ginv: &DMatrix<f64>,
    seeds: &[Vec<f64>],
    eta_normal: &[f64],
    u: &[f64],
) -> Result<Vec<Vec<f64>>, DiffGeoError> {
    let m = eta_normal.len();
    if seeds.len() < m {
        return Err(DiffGeoError::FrameBreakdown {
            u: u.to_vec(),
            detail: format!("{} normal seeds for codimension {m}", seeds.len()),
        });
    }
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(m);
    for p in 0..m {
        let scale: f64 = seeds[p].iter().map(|x| x * x).sum();
        let mut v = project_off_tangent(jet, eta, ginv, &seeds[p]);
        for (q, nq) in frame.iter().enumerate() {
            let c = eta_normal[q] * eta_dot(eta, &v, nq);
            for (a, b) in v.iter_mut().zip(nq) {
                *a -= c * b;
            }
        }
        let nn = eta_dot(eta, &v, &v);
        if nn * eta_normal[p] <= BREAKDOWN_TOL * scale {
            return Err(DiffGeoError::FrameBreakdown {
                u: u.to_vec(),
                detail: format!(
                    "normal {p} has squared norm {nn:e}, expected sign {}",
                    eta_normal[p]
                ),
            });
        }
        let s = nn.abs().sqrt();
        frame.push(v.iter().map(|x| x / s).collect());
    }
    Ok(frame)
}

/// Normal frame at the chart center built from ambient coordinate axes,
/// spacelike slots first and the timelike slot last. Used as fixed seeds
/// for embeddings without their own.
pub fn reference_normals(emb: &dyn Embedding) -> Result<Vec<Vec<f64>>, DiffGeoError> {
    let u0 = emb.chart().center();
    let jet = emb.jet(&u0);
    let dim = emb.ambient_dim();
    let eta = emb.signature().ambient_eta(dim);
    let eta_normal = emb.signature().normal_eta(emb.codim());
    let g = DMatrix::from_fn(emb.intrinsic_dim(), emb.intrinsic_dim(), |i, j| {
        eta_dot(&eta, &jet.d1[i], &jet.d1[j])
    });
    let ginv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| DiffGeoError::NotSpacelike { u: u0.clone() })?;
    let mut frame: Vec<Vec<f64>> = Vec::new();
    let mut used = vec![false; dim];
    for &target in &eta_normal {
        let mut best: Option<(usize, f64, Vec<f64>)> = None;
        for a in 0..dim {
            if used[a] {
                continue;
            }
            let mut e = vec![0.0; dim];
            e[a] = 1.0;
            let mut v = project_off_tangent(&jet, &eta, &ginv, &e);
            for (q, nq) in frame.iter().enumerate() {
                let c = eta_normal[q] * eta_dot(&eta, &v, nq);
                for (x, y) in v.iter_mut().zip(nq) {
                    *x -= c * y;
                }
            }
            let nn = eta_dot(&eta, &v, &v) * target;
            if nn > BREAKDOWN_TOL && best.as_ref().is_none_or(|b| nn > b.1) {
                best = Some((a, nn, v));
            }
        }
        let (a, nn, v) = best.ok_or_else(|| DiffGeoError::FrameBreakdown {
            u: u0.clone(),
            detail: "no coordinate axis yields a normal of the required type".into(),
        })?;
        used[a] = true;
        let s = nn.sqrt();
        frame.push(v.iter().map(|x| x / s).collect());
    }
    Ok(frame)
}
