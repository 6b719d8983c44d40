//! Tensor-product quadrature over parameter boxes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature.gauss_order must be between 1 and 256, got {0}")]
    GaussOrder(usize),
    #[error("quadrature.periodic_nodes must be between 1 and 65536, got {0}")]
    PeriodicNodes(usize),
    #[error("chart axis {axis} has an empty or invalid range [{lo}, {hi}]")]
    Axis { axis: usize, lo: f64, hi: f64 },
}

/// One coordinate of a parameter box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl Axis {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Axis {
            lo,
            hi,
            periodic: false,
        }
    }

    pub fn circle() -> Self {
        Axis {
            lo: 0.0,
            hi: 2.0 * PI,
            periodic: true,
        }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Parameter box of a chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub axes: Vec<Axis>,
}

impl Chart {
    pub fn new(axes: Vec<Axis>) -> Self {
        Chart { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.axes.iter().map(Axis::center).collect()
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        for (i, a) in self.axes.iter().enumerate() {
            if !(a.lo.is_finite() && a.hi.is_finite() && a.hi > a.lo) {
                return Err(QuadratureError::Axis {
                    axis: i,
                    lo: a.lo,
                    hi: a.hi,
                });
            }
        }
        Ok(())
    }
}

/// Gauss-Legendre order for bounded axes, trapezoid node count for periodic ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub gauss_order: usize,
    pub periodic_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            gauss_order: 16,
            periodic_nodes: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(1..=256).contains(&self.gauss_order) {
            return Err(QuadratureError::GaussOrder(self.gauss_order));
        }
        if !(1..=65536).contains(&self.periodic_nodes) {
            return Err(QuadratureError::PeriodicNodes(self.periodic_nodes));
        }
        Ok(())
    }

    /// Twice the nodes per axis; the difference to the base rule is the error estimate.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            gauss_order: 2 * self.gauss_order,
            periodic_nodes: 2 * self.periodic_nodes,
        }
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

fn axis_rule(axis: &Axis, spec: &QuadratureSpec) -> Vec<(f64, f64)> {
    if axis.periodic {
        let n = spec.periodic_nodes;
        let h = axis.length() / n as f64;
        (0..n).map(|k| (axis.lo + k as f64 * h, h)).collect()
    } else {
        let (x, w) = gauss_legendre(spec.gauss_order);
        let half = 0.5 * axis.length();
        let mid = axis.center();
        x.iter()
            .zip(&w)
            .map(|(xi, wi)| (mid + half * xi, half * wi))
            .collect()
    }
}

/// Tensor grid of `(node, weight)` pairs covering the chart.
pub fn tensor_grid(chart: &Chart, spec: &QuadratureSpec) -> Vec<(Vec<f64>, f64)> {
    let rules: Vec<Vec<(f64, f64)>> = chart.axes.iter().map(|a| axis_rule(a, spec)).collect();
    let mut out = vec![(Vec::with_capacity(chart.dim()), 1.0)];
    for rule in &rules {
        let mut next = Vec::with_capacity(out.len() * rule.len());
        for (u, w) in &out {
            for &(x, wx) in rule {
                let mut v = u.clone();
                v.push(x);
                next.push((v, w * wx));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_degree_2n_minus_1() {
        for n in [1usize, 2, 5, 16, 32] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14, "n={n}");
            for k in 0..2 * n {
                let q: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(xi, wi)| wi * xi.powi(k as i32))
                    .sum();
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                assert!((q - exact).abs() < 1e-13, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn tensor_grid_integrates_sphere_area() {
        let chart = Chart::new(vec![Axis::interval(0.0, PI), Axis::circle()]);
        let a: f64 = tensor_grid(&chart, &QuadratureSpec::default())
            .iter()
            .map(|(u, w)| w * u[0].sin())
            .sum();
        assert!((a - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn validation() {
        assert!(QuadratureSpec {
            gauss_order: 0,
            periodic_nodes: 8
        }
        .validate()
        .is_err());
        assert!(Chart::new(vec![Axis::interval(1.0, 1.0)])
            .validate()
            .is_err());
    }
}
