//! Forward-mode derivatives up to third order in a handful of variables.

use std::ops::{Add, Mul, Neg, Sub};

/// Value with full gradient, Hessian and third-derivative tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct D3 {
    n: usize,
    pub v: f64,
    g: Vec<f64>,
    h: Vec<f64>,
    t: Vec<f64>,
}

impl D3 {
    pub fn constant(n: usize, v: f64) -> Self {
        D3 {
            n,
            v,
            g: vec![0.0; n],
            h: vec![0.0; n * n],
            t: vec![0.0; n * n * n],
        }
    }

    /// The coordinate `u_i` at value `v`.
    pub fn var(n: usize, i: usize, v: f64) -> Self {
        let mut d = Self::constant(n, v);
        d.g[i] = 1.0;
        d
    }

    pub fn vars(u: &[f64]) -> Vec<D3> {
        (0..u.len()).map(|i| D3::var(u.len(), i, u[i])).collect()
    }

    pub fn d1(&self, i: usize) -> f64 {
        self.g[i]
    }

    pub fn d2(&self, i: usize, j: usize) -> f64 {
        self.h[i * self.n + j]
    }

    pub fn d3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t[(i * self.n + j) * self.n + k]
    }

    /// `phi(self)` given `phi` and its first three derivatives at `self.v`.
    fn chain(&self, f0: f64, f1: f64, f2: f64, f3: f64) -> D3 {
        let n = self.n;
        let mut out = D3::constant(n, f0);
        for i in 0..n {
            out.g[i] = f1 * self.g[i];
            for j in 0..n {
                out.h[i * n + j] = f2 * self.g[i] * self.g[j] + f1 * self.h[i * n + j];
                for k in 0..n {
                    out.t[(i * n + j) * n + k] = f3 * self.g[i] * self.g[j] * self.g[k]
                        + f2 * (self.h[i * n + j] * self.g[k]
                            + self.h[i * n + k] * self.g[j]
                            + self.h[j * n + k] * self.g[i])
                        + f1 * self.t[(i * n + j) * n + k];
                }
            }
        }
        out
    }

    pub fn sin(&self) -> D3 {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s, -c)
    }

    pub fn cos(&self) -> D3 {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c, s)
    }

    pub fn sqrt(&self) -> D3 {
        let r = self.v.sqrt();
        self.chain(
            r,
            0.5 / r,
            -0.25 / (r * self.v),
            0.375 / (r * self.v * self.v),
        )
    }

    pub fn powi(&self, k: i32) -> D3 {
        let x = self.v;
        let kf = k as f64;
        let p = |e: i32| if e < 0 && x == 0.0 { 0.0 } else { x.powi(e) };
        self.chain(
            p(k),
            kf * p(k - 1),
            kf * (kf - 1.0) * p(k - 2),
            kf * (kf - 1.0) * (kf - 2.0) * p(k - 3),
        )
    }

    pub fn scale(&self, c: f64) -> D3 {
        D3 {
            n: self.n,
            v: self.v * c,
            g: self.g.iter().map(|x| x * c).collect(),
            h: self.h.iter().map(|x| x * c).collect(),
            t: self.t.iter().map(|x| x * c).collect(),
        }
    }

    fn zip(&self, o: &D3, f: impl Fn(f64, f64) -> f64) -> D3 {
        assert_eq!(self.n, o.n, "variable count mismatch");
        let z = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect();
        D3 {
            n: self.n,
            v: f(self.v, o.v),
            g: z(&self.g, &o.g),
            h: z(&self.h, &o.h),
            t: z(&self.t, &o.t),
        }
    }
}

impl Add for &D3 {
    type Output = D3;
    fn add(self, o: &D3) -> D3 {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for &D3 {
    type Output = D3;
    fn sub(self, o: &D3) -> D3 {
        self.zip(o, |a, b| a - b)
    }
}

impl Neg for &D3 {
    type Output = D3;
    fn neg(self) -> D3 {
        self.scale(-1.0)
    }
}

impl Add<f64> for &D3 {
    type Output = D3;
    fn add(self, c: f64) -> D3 {
        let mut d = self.clone();
        d.v += c;
        d
    }
}

impl Mul<f64> for &D3 {
    type Output = D3;
    fn mul(self, c: f64) -> D3 {
        self.scale(c)
    }
}

impl Mul for &D3 {
    type Output = D3;
    fn mul(self, o: &D3) -> D3 {
        assert_eq!(self.n, o.n, "variable count mismatch");
        let n = self.n;
        let (f, g) = (self, o);
        let mut out = D3::constant(n, f.v * g.v);
        for i in 0..n {
            out.g[i] = f.g[i] * g.v + f.v * g.g[i];
            for j in 0..n {
                let ij = i * n + j;
                out.h[ij] = f.h[ij] * g.v + f.g[i] * g.g[j] + f.g[j] * g.g[i] + f.v * g.h[ij];
                for k in 0..n {
                    let (ik, jk) = (i * n + k, j * n + k);
                    let ijk = ij * n + k;
                    out.t[ijk] = f.t[ijk] * g.v
                        + f.h[ij] * g.g[k]
                        + f.h[ik] * g.g[j]
                        + f.h[jk] * g.g[i]
                        + f.g[i] * g.h[jk]
                        + f.g[j] * g.h[ik]
                        + f.g[k] * g.h[ij]
                        + f.v * g.t[ijk];
                }
            }
        }
        out
    }
}
