use std::fmt;
use std::sync::Arc;

use super::{Embedding, Jet, Signature};
use crate::quadrature::Chart;

pub type PositionFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type SeedFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

/// Embedding given only by `r(u)`; derivatives by central differences.
///
/// First and second derivatives use step `step * L` per axis (`L` the axis
/// length), third derivatives use `step3 * L`. Stencils that would leave a
/// bounded axis are shrunk and the jet is flagged as clamped.
#[derive(Clone)]
pub struct FiniteDifferenceEmbedding {
    pub label: String,
    pub n: usize,
    pub ambient: usize,
    pub chart: Chart,
    pub signature: Signature,
    pub position: PositionFn,
    pub seeds: Option<SeedFn>,
    pub step: f64,
    pub step3: f64,
}

impl fmt::Debug for FiniteDifferenceEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteDifferenceEmbedding")
            .field("label", &self.label)
            .field("n", &self.n)
            .field("ambient", &self.ambient)
            .field("step", &self.step)
            .finish()
    }
}

impl FiniteDifferenceEmbedding {
    pub fn new(
        label: impl Into<String>,
        chart: Chart,
        ambient: usize,
        signature: Signature,
        position: PositionFn,
    ) -> Self {
        FiniteDifferenceEmbedding {
            label: label.into(),
            n: chart.dim(),
            ambient,
            chart,
            signature,
            position,
            seeds: None,
            step: 1e-4,
            step3: 1e-3,
        }
    }

    pub fn with_seeds(mut self, seeds: SeedFn) -> Self {
        self.seeds = Some(seeds);
        self
    }

    /// Per-axis steps, shrunk so that `u +- reach * h` stays inside bounded axes.
    fn steps(&self, u: &[f64], rel: f64, reach: f64, clamped: &mut bool) -> Vec<f64> {
        self.chart
            .axes
            .iter()
            .zip(u)
            .map(|(a, &x)| {
                let h = rel * a.length();
                if a.periodic {
                    return h;
                }
                let room = (x - a.lo).min(a.hi - x) / reach;
                if room < h {
                    *clamped = true;
                    room.max(f64::EPSILON * a.length())
                } else {
                    h
                }
            })
            .collect()
    }

    fn eval_shift(&self, u: &[f64], shifts: &[(usize, f64)]) -> Vec<f64> {
        let mut v = u.to_vec();
        for &(i, d) in shifts {
            v[i] += d;
        }
        (self.position)(&v)
    }
}

fn combine(parts: &[(f64, Vec<f64>)]) -> Vec<f64> {
    let dim = parts[0].1.len();
    (0..dim)
        .map(|a| parts.iter().map(|(c, v)| c * v[a]).sum())
        .collect()
}

impl Embedding for FiniteDifferenceEmbedding {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn intrinsic_dim(&self) -> usize {
        self.n
    }

    fn ambient_dim(&self) -> usize {
        self.ambient
    }

    fn signature(&self) -> Signature {
        self.signature
    }

    fn chart(&self) -> Chart {
        self.chart.clone()
    }

    fn jet(&self, u: &[f64]) -> Jet {
        let n = self.n;
        let mut clamped = false;
        let h = self.steps(u, self.step, 1.0, &mut clamped);
        let h3 = self.steps(u, self.step3, 3.0, &mut clamped);
        let r = (self.position)(u);
        let f = |s: &[(usize, f64)]| self.eval_shift(u, s);

        let d1: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                combine(&[
                    (0.5 / h[i], f(&[(i, h[i])])),
                    (-0.5 / h[i], f(&[(i, -h[i])])),
                ])
            })
            .collect();

        let mut d2 = vec![vec![vec![0.0; self.ambient]; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    combine(&[
                        (1.0 / (h[i] * h[i]), f(&[(i, h[i])])),
                        (-2.0 / (h[i] * h[i]), r.clone()),
                        (1.0 / (h[i] * h[i]), f(&[(i, -h[i])])),
                    ])
                } else {
                    let c = 0.25 / (h[i] * h[j]);
                    combine(&[
                        (c, f(&[(i, h[i]), (j, h[j])])),
                        (-c, f(&[(i, h[i]), (j, -h[j])])),
                        (-c, f(&[(i, -h[i]), (j, h[j])])),
                        (c, f(&[(i, -h[i]), (j, -h[j])])),
                    ])
                };
                d2[i][j] = v.clone();
                d2[j][i] = v;
            }
        }

        // product of three central-difference operators D_i D_j D_k
        let mut d3 = vec![vec![vec![vec![0.0; self.ambient]; n]; n]; n];
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let mut parts = Vec::with_capacity(8);
                    for s in 0..8u32 {
                        let sg = |b: u32| if s & (1 << b) == 0 { 1.0 } else { -1.0 };
                        let (si, sj, sk) = (sg(0), sg(1), sg(2));
                        let c = si * sj * sk / (8.0 * h3[i] * h3[j] * h3[k]);
                        parts.push((c, f(&[(i, si * h3[i]), (j, sj * h3[j]), (k, sk * h3[k])])));
                    }
                    let v = combine(&parts);
                    for (a, b, c) in [
                        (i, j, k),
                        (i, k, j),
                        (j, i, k),
                        (j, k, i),
                        (k, i, j),
                        (k, j, i),
                    ] {
                        d3[a][b][c] = v.clone();
                    }
                }
            }
        }
        Jet {
            r,
            d1,
            d2,
            d3,
            clamped,
        }
    }

    fn normal_seeds(&self, u: &[f64]) -> Option<Vec<Vec<f64>>> {
        self.seeds.as_ref().map(|s| s(u))
    }
}
