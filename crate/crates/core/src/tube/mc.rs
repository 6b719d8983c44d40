use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::TubeError;
use crate::diffgeo::ManifoldSpec;
use crate::domains::Domain;
use crate::par;

const BATCH: u64 = 20_000;

#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub radius: f64,
    pub estimate: f64,
    pub std_err: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
}

/// Distance below which the nearest-point map of `spec` is single valued.
pub fn focal_bound(spec: &ManifoldSpec) -> Result<f64, TubeError> {
    match spec {
        ManifoldSpec::Circle { radius, .. } | ManifoldSpec::Sphere { radius, .. } => Ok(*radius),
        ManifoldSpec::Torus { major, minor } => Ok(minor.min(major - minor)),
        other => Err(TubeError::MonteCarlo(format!(
            "no closed-form projection for {} manifolds",
            other.kind()
        ))),
    }
}

/// Normal offset of `x` in the same frame the analytic embedding uses:
/// circle `(rho - R, x_3, ..)`, sphere `|x| - R`, torus distance to the core
/// circle minus the minor radius.
fn normal_offset(spec: &ManifoldSpec, x: &[f64]) -> Vec<f64> {
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    match spec {
        ManifoldSpec::Circle { radius, .. } => {
            let mut t = vec![norm(&x[..2]) - radius];
            t.extend_from_slice(&x[2..]);
            t
        }
        ManifoldSpec::Sphere { radius, .. } => vec![norm(x) - radius],
        ManifoldSpec::Torus { major, minor } => {
            let rho = norm(&x[..2]) - major;
            vec![(rho * rho + x[2] * x[2]).sqrt() - minor]
        }
        _ => unreachable!("checked by focal_bound"),
    }
}

/// Half-widths of an axis-aligned box containing the tube of reach `s`.
fn bounding_box(spec: &ManifoldSpec, s: f64) -> Vec<f64> {
    match spec {
        ManifoldSpec::Circle { radius, ambient } => {
            let mut b = vec![radius + s, radius + s];
            b.resize(*ambient, s);
            b
        }
        ManifoldSpec::Sphere { radius, dim } => vec![radius + s; dim + 1],
        ManifoldSpec::Torus { major, minor } => {
            vec![major + minor + s, major + minor + s, minor + s]
        }
        _ => unreachable!("checked by focal_bound"),
    }
}

/// Rejection-sampling estimate of the tube volume at radius `a`.
pub fn tube_volume_mc(
    spec: &ManifoldSpec,
    domain: &Domain,
    a: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, TubeError> {
    let focal = focal_bound(spec)?;
    let m = match spec {
        ManifoldSpec::Circle { ambient, .. } => ambient - 1,
        _ => 1,
    };
    if domain.dim() != m {
        return Err(TubeError::DimensionMismatch {
            codim: m,
            domain: domain.dim(),
        });
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(TubeError::BadRadius(a));
    }
    if samples == 0 {
        return Err(TubeError::MonteCarlo(
            "sample count must be positive".into(),
        ));
    }
    let reach = a * domain.circumradius();
    if reach >= focal {
        return Err(TubeError::BeyondReach {
            radius: a,
            circumradius: domain.circumradius(),
            reach: focal,
        });
    }
    let half = bounding_box(spec, reach);
    let box_volume: f64 = half.iter().map(|h| 2.0 * h).product();
    let batches = samples.div_ceil(BATCH) as usize;
    let counts = par::map_range(batches, |b| -> Result<u64, TubeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let count = BATCH.min(samples - b as u64 * BATCH);
        let mut x = vec![0.0; half.len()];
        let mut hits = 0;
        for _ in 0..count {
            for (xi, h) in x.iter_mut().zip(&half) {
                *xi = rng.random_range(-h..*h);
            }
            let t: Vec<f64> = normal_offset(spec, &x).iter().map(|v| v / a).collect();
            if t.iter().map(|v| v * v).sum::<f64>().sqrt() <= domain.circumradius()
                && domain.contains(&t)?
            {
                hits += 1;
            }
        }
        Ok(hits)
    });
    let hits: u64 = counts.into_iter().sum::<Result<u64, _>>()?;
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        radius: a,
        estimate: box_volume * p,
        std_err: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        hits,
        seed,
    })
}
