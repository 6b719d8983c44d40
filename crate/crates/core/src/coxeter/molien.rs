use crate::par;
use crate::poly::Mat;

/// Highest degree for Molien and degree-product series.
pub const MAX_SERIES_DEGREE: u32 = 30;

/// Coefficients `a_k` of `det(I - q g) = sum_k a_k q^k` by Faddeev-LeVerrier.
fn det_one_minus(g: &Mat<f64>) -> Vec<f64> {
    let n = g.dim();
    // char poly det(x I - g) = x^n + c_1 x^{n-1} + .. + c_n, and
    // det(I - q g) = q^n det(q^{-1} I - g) = 1 + c_1 q + .. + c_n q^n
    let mut c = vec![1.0];
    let mut mk = Mat::<f64>::from_fn(n, |_, _| 0.0);
    for k in 1..=n {
        let prev = *c.last().unwrap();
        let shifted = Mat::from_fn(n, |i, j| mk.get(i, j) + if i == j { prev } else { 0.0 });
        mk = g.mul(&shifted);
        let tr: f64 = (0..n).map(|i| mk.get(i, i)).sum();
        c.push(-tr / k as f64);
    }
    c
}

/// Power series of `1 / a(q)` up to `q^max`, assuming `a_0 = 1`.
fn invert_series(a: &[f64], max: usize) -> Vec<f64> {
    let mut b = vec![0.0; max + 1];
    b[0] = 1.0;
    for k in 1..=max {
        let s: f64 = (1..a.len().min(k + 1)).map(|j| a[j] * b[k - j]).sum();
        b[k] = -s;
    }
    b
}

pub(super) fn molien_series(elements: &[Mat<f64>], max_degree: u32) -> Vec<u64> {
    let max = max_degree as usize;
    let parts = par::map_slice(elements, |g| invert_series(&det_one_minus(g), max));
    let mut sum = vec![0.0; max + 1];
    for p in &parts {
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
    }
    let order = elements.len() as f64;
    sum.iter()
        .enumerate()
        .map(|(d, s)| {
            let v = s / order;
            let r = v.round();
            assert!(
                (v - r).abs() < 1e-6,
                "Molien coefficient {d} not integral: {v}"
            );
            r as u64
        })
        .collect()
}

/// Coefficients of `prod_i 1 / (1 - q^{d_i})` up to `q^max_degree`.
pub fn degree_product_series(degrees: &[u32], max_degree: u32) -> Vec<u64> {
    let max = max_degree as usize;
    let mut s = vec![0u64; max + 1];
    s[0] = 1;
    for &d in degrees {
        let d = d as usize;
        for k in d..=max {
            s[k] += s[k - d];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_rotation() {
        // rotation by theta: det(I - q g) = 1 - 2 cos(theta) q + q^2
        let th: f64 = 0.7;
        let g = Mat::from_rows(vec![vec![th.cos(), -th.sin()], vec![th.sin(), th.cos()]]);
        let a = det_one_minus(&g);
        assert!((a[1] + 2.0 * th.cos()).abs() < 1e-14 && (a[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_series_small() {
        // 1/((1-q^2)(1-q^4)): 1,0,1,0,2,0,2,0,3
        assert_eq!(
            degree_product_series(&[2, 4], 8),
            vec![1, 0, 1, 0, 2, 0, 2, 0, 3]
        );
    }
}
