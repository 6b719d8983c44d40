use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Real trigonometric polynomial `c + sum_k (a_k cos(k phi) + b_k sin(k phi))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    pub constant: f64,
    /// `[mode, cos coefficient, sin coefficient]` triples; mode > 0.
    #[serde(default)]
    pub modes: Vec<(u32, f64, f64)>,
}

impl TrigSeries {
    pub fn constant(c: f64) -> Self {
        TrigSeries {
            constant: c,
            modes: Vec::new(),
        }
    }

    pub fn new(constant: f64, modes: Vec<(u32, f64, f64)>) -> Self {
        TrigSeries { constant, modes }.normalized()
    }

    pub fn eval(&self, phi: f64) -> f64 {
        self.constant
            + self
                .modes
                .iter()
                .map(|&(k, a, b)| a * (k as f64 * phi).cos() + b * (k as f64 * phi).sin())
                .sum::<f64>()
    }

    pub fn max_mode(&self) -> u32 {
        self.modes.iter().map(|m| m.0).max().unwrap_or(0)
    }

    /// Product of two series, using the product-to-sum identities.
    pub fn mul(&self, other: &TrigSeries) -> TrigSeries {
        // complex coefficients: f = sum_k z_k e^{ik phi}, z_{-k} = conj(z_k)
        let a = self.to_complex();
        let b = other.to_complex();
        let mut out: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
        for (&k, &(ar, ai)) in &a {
            for (&j, &(br, bi)) in &b {
                let e = out.entry(k + j).or_insert((0.0, 0.0));
                e.0 += ar * br - ai * bi;
                e.1 += ar * bi + ai * br;
            }
        }
        let constant = out.get(&0).map(|z| z.0).unwrap_or(0.0);
        let modes = out
            .iter()
            .filter(|(&k, _)| k > 0)
            .map(|(&k, &(re, im))| (k as u32, 2.0 * re, -2.0 * im))
            .collect();
        TrigSeries { constant, modes }.normalized()
    }

    fn to_complex(&self) -> BTreeMap<i64, (f64, f64)> {
        let mut z = BTreeMap::new();
        z.insert(0, (self.constant, 0.0));
        for &(k, a, b) in &self.modes {
            // a cos + b sin = (a - ib)/2 e^{ik} + (a + ib)/2 e^{-ik}
            let e = z.entry(k as i64).or_insert((0.0, 0.0));
            e.0 += a / 2.0;
            e.1 -= b / 2.0;
            let e = z.entry(-(k as i64)).or_insert((0.0, 0.0));
            e.0 += a / 2.0;
            e.1 += b / 2.0;
        }
        z
    }

    fn normalized(self) -> Self {
        let mut merged: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        let mut constant = self.constant;
        for (k, a, b) in self.modes {
            if k == 0 {
                constant += a;
                continue;
            }
            let e = merged.entry(k).or_insert((0.0, 0.0));
            e.0 += a;
            e.1 += b;
        }
        TrigSeries {
            constant,
            modes: merged
                .into_iter()
                .filter(|(_, (a, b))| *a != 0.0 || *b != 0.0)
                .map(|(k, (a, b))| (k, a, b))
                .collect(),
        }
    }

    /// Minimum and maximum over an equispaced grid of `n` nodes.
    pub fn range_on_grid(&self, n: usize) -> (f64, f64) {
        (0..n)
            .map(|i| self.eval(2.0 * PI * i as f64 / n as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_pointwise() {
        let b = TrigSeries::new(1.0, vec![(16, 0.2, 0.0)]);
        let c = TrigSeries::new(2.0, vec![(3, 1.0, 0.0), (5, 0.0, -0.3)]);
        let p = b.mul(&c);
        for i in 0..50 {
            let phi = 0.37 * i as f64;
            assert!((p.eval(phi) - b.eval(phi) * c.eval(phi)).abs() < 1e-13);
        }
        let modes: Vec<u32> = p.modes.iter().map(|m| m.0).collect();
        assert_eq!(modes, vec![3, 5, 11, 13, 16, 19, 21]);
    }
}
