//! Finite reflection groups as explicit orthogonal matrix groups.

mod molien;

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{Mat, Rat};

pub use molien::{degree_product_series, MAX_SERIES_DEGREE};

/// Rounding granularity used as a hash key when deduplicating matrices.
const DEDUP_SCALE: f64 = 1e9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error(
        "element enumeration for {0} is out of scope; degrees are available via degrees_table"
    )]
    EnumerationOutOfScope(GroupType),
    #[error("unsupported group {0}")]
    Unsupported(String),
    #[error("series degree {0} exceeds the maximum {max}", max = MAX_SERIES_DEGREE)]
    DegreeTooLarge(u32),
}

/// Irreducible Coxeter type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(usize),
}

impl GroupType {
    pub fn rank(&self) -> usize {
        match self {
            GroupType::A(m) | GroupType::B(m) | GroupType::D(m) => *m,
            GroupType::E6 => 6,
            GroupType::E7 => 7,
            GroupType::E8 => 8,
            GroupType::F4 | GroupType::H4 => 4,
            GroupType::H3 => 3,
            GroupType::I2(_) => 2,
        }
    }

    /// Builds a type from a family letter and parameters, e.g. `("B", m=2)`,
    /// `("I2", k=5)` or `("H3", -)`.
    pub fn from_parts(
        family: &str,
        m: Option<usize>,
        k: Option<usize>,
    ) -> Result<Self, GroupError> {
        let need_m =
            || m.ok_or_else(|| GroupError::Unsupported(format!("{family} needs a rank m")));
        let t = match family.to_ascii_uppercase().as_str() {
            "A" => GroupType::A(need_m()?),
            "B" => GroupType::B(need_m()?),
            "D" => GroupType::D(need_m()?),
            "I2" | "I" => GroupType::I2(
                k.ok_or_else(|| GroupError::Unsupported("I2 needs a parameter k".into()))?,
            ),
            other => other.parse()?,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), GroupError> {
        let bad = |s: String| Err(GroupError::Unsupported(s));
        match *self {
            GroupType::A(m) if m < 1 => bad("A_m needs m >= 1".into()),
            GroupType::B(m) if m < 2 => bad("B_m needs m >= 2".into()),
            GroupType::D(m) if m < 4 => bad("D_m needs m >= 4".into()),
            GroupType::I2(k) if k < 3 => bad("I2(k) needs k >= 3".into()),
            _ => Ok(()),
        }
    }

    /// Classical group order.
    pub fn order(&self) -> u64 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        match *self {
            GroupType::A(m) => fact(m + 1),
            GroupType::B(m) => (1u64 << m) * fact(m),
            GroupType::D(m) => (1u64 << (m - 1)) * fact(m),
            GroupType::E6 => 51_840,
            GroupType::E7 => 2_903_040,
            GroupType::E8 => 696_729_600,
            GroupType::F4 => 1152,
            GroupType::H3 => 120,
            GroupType::H4 => 14_400,
            GroupType::I2(k) => 2 * k as u64,
        }
    }

    /// Degrees of the basic invariants, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = match *self {
            GroupType::A(m) => (2..=m as u32 + 1).collect(),
            GroupType::B(m) => (1..=m as u32).map(|i| 2 * i).collect(),
            GroupType::D(m) => {
                let mut v: Vec<u32> = (1..m as u32).map(|i| 2 * i).collect();
                v.push(m as u32);
                v
            }
            GroupType::E6 => vec![2, 5, 6, 8, 9, 12],
            GroupType::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            GroupType::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            GroupType::F4 => vec![2, 6, 8, 12],
            GroupType::H3 => vec![2, 6, 10],
            GroupType::H4 => vec![2, 12, 20, 30],
            GroupType::I2(k) => vec![2, k as u32],
        };
        d.sort_unstable();
        d
    }

    pub fn is_enumerable(&self) -> bool {
        !matches!(self, GroupType::E6 | GroupType::E7 | GroupType::E8)
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::A(m) => write!(f, "A{m}"),
            GroupType::B(m) => write!(f, "B{m}"),
            GroupType::D(m) => write!(f, "D{m}"),
            GroupType::E6 => write!(f, "E6"),
            GroupType::E7 => write!(f, "E7"),
            GroupType::E8 => write!(f, "E8"),
            GroupType::F4 => write!(f, "F4"),
            GroupType::H3 => write!(f, "H3"),
            GroupType::H4 => write!(f, "H4"),
            GroupType::I2(k) => write!(f, "I2({k})"),
        }
    }
}

impl FromStr for GroupType {
    type Err = GroupError;

    /// Accepts `A3`, `B2`, `D4`, `E8`, `F4`, `H3`, `H4`, `I2(5)`.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let s = s.trim().to_ascii_uppercase();
        let bad = || GroupError::Unsupported(s.clone());
        let t = match s.as_str() {
            "E6" => GroupType::E6,
            "E7" => GroupType::E7,
            "E8" => GroupType::E8,
            "F4" => GroupType::F4,
            "H3" => GroupType::H3,
            "H4" => GroupType::H4,
            _ if s.starts_with("I2(") && s.ends_with(')') => {
                GroupType::I2(s[3..s.len() - 1].parse().map_err(|_| bad())?)
            }
            _ => {
                let (fam, rest) = s.split_at(1);
                let m: usize = rest.parse().map_err(|_| bad())?;
                match fam {
                    "A" => GroupType::A(m),
                    "B" => GroupType::B(m),
                    "D" => GroupType::D(m),
                    _ => return Err(bad()),
                }
            }
        };
        t.validate()?;
        Ok(t)
    }
}

/// One row of the table of basic invariant degrees.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeRow {
    pub family: &'static str,
    pub rank: &'static str,
    pub degrees: &'static str,
}

/// The table of invariant degrees for every irreducible type, including E6, E7, E8.
pub fn degrees_table() -> Vec<DegreeRow> {
    let row = |family, rank, degrees| DegreeRow {
        family,
        rank,
        degrees,
    };
    vec![
        row("A_m", ">= 1", "2, 3, ..., m+1"),
        row("B_m", ">= 2", "2, 4, ..., 2m"),
        row("D_m", ">= 4", "2, 4, ..., 2m-2, m"),
        row("E6", "6", "2, 5, 6, 8, 9, 12"),
        row("E7", "7", "2, 6, 8, 10, 12, 14, 18"),
        row("E8", "8", "2, 8, 12, 14, 18, 20, 24, 30"),
        row("F4", "4", "2, 6, 8, 12"),
        row("H3", "3", "2, 6, 10"),
        row("H4", "4", "2, 12, 20, 30"),
        row("I2(k)", "2", "2, k"),
    ]
}

/// An enumerated finite reflection group acting on `R^m`.
#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    pub kind: GroupType,
    pub generators: Vec<Mat<f64>>,
    elements: Vec<Mat<f64>>,
}

impl ReflectionGroup {
    pub fn dim(&self) -> usize {
        self.kind.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.kind.degrees()
    }

    pub fn elements(&self) -> &[Mat<f64>] {
        &self.elements
    }

    /// Exact copies of the elements when every entry is a half-integer
    /// (B_m, D_m, F4 and small A_1); `None` otherwise.
    pub fn exact_elements(&self) -> Option<Vec<Mat<Rat>>> {
        self.elements
            .iter()
            .map(|g| {
                let n = g.dim();
                let mut rows = Vec::with_capacity(n);
                for i in 0..n {
                    let mut row = Vec::with_capacity(n);
                    for j in 0..n {
                        let twice = 2.0 * g.get(i, j);
                        let r = twice.round();
                        if (twice - r).abs() > 1e-12 {
                            return None;
                        }
                        row.push(Rat::new(BigInt::from(r as i64), BigInt::from(2)));
                    }
                    rows.push(row);
                }
                Some(Mat::from_rows(rows))
            })
            .collect()
    }

    /// Dimension of the space of invariant homogeneous polynomials of degree `d`.
    pub fn invariant_dimension(&self, d: u32) -> Result<u64, GroupError> {
        Ok(self.molien_series(d)?[d as usize])
    }

    /// Molien series coefficients for degrees `0..=max_degree`.
    pub fn molien_series(&self, max_degree: u32) -> Result<Vec<u64>, GroupError> {
        if max_degree > MAX_SERIES_DEGREE {
            return Err(GroupError::DegreeTooLarge(max_degree));
        }
        Ok(molien::molien_series(&self.elements, max_degree))
    }

    /// Largest `n <= max_degree` such that the only invariants of degree
    /// `1..=n` are powers of `|t|^2`.
    pub fn orthogonal_of_degree(&self, max_degree: u32) -> Result<u32, GroupError> {
        let series = self.molien_series(max_degree)?;
        let mut n = 0;
        for d in 1..=max_degree {
            let expect = if d % 2 == 0 { 1 } else { 0 };
            if series[d as usize] != expect {
                break;
            }
            n = d;
        }
        Ok(n)
    }
}

fn reflection(root: &[f64]) -> Mat<f64> {
    let norm2: f64 = root.iter().map(|x| x * x).sum();
    let n = root.len();
    Mat::from_fn(n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - 2.0 * root[i] * root[j] / norm2
    })
}

/// Simple roots realizing the Coxeter matrix with entries `m_ij`, via the
/// Cholesky factor of the Gram matrix `-cos(pi / m_ij)`.
fn roots_from_coxeter_matrix(cm: &[Vec<usize>]) -> Vec<Vec<f64>> {
    let n = cm.len();
    let gram = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            -(PI / cm[i][j] as f64).cos()
        }
    });
    let l = gram
        .cholesky()
        .expect("Coxeter Gram matrix is positive definite")
        .l();
    (0..n)
        .map(|i| (0..n).map(|j| l[(i, j)]).collect())
        .collect()
}

fn unit(m: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[i] = 1.0;
    v
}

fn simple_roots(kind: GroupType) -> Vec<Vec<f64>> {
    let diff = |m: usize, i: usize| {
        let mut v = unit(m, i);
        v[i + 1] = -1.0;
        v
    };
    match kind {
        GroupType::A(m) => {
            // e_i - e_{i+1} in R^{m+1}, written in an orthonormal basis of the
            // sum-zero hyperplane: b_k = (1, .., 1, -k, 0, ..) / sqrt(k(k+1))
            let basis: Vec<Vec<f64>> = (1..=m)
                .map(|k| {
                    let s = ((k * (k + 1)) as f64).sqrt();
                    (0..=m)
                        .map(|j| match j.cmp(&k) {
                            std::cmp::Ordering::Less => 1.0 / s,
                            std::cmp::Ordering::Equal => -(k as f64) / s,
                            std::cmp::Ordering::Greater => 0.0,
                        })
                        .collect()
                })
                .collect();
            (0..m)
                .map(|i| {
                    let r = diff(m + 1, i);
                    basis
                        .iter()
                        .map(|b| b.iter().zip(&r).map(|(x, y)| x * y).sum())
                        .collect()
                })
                .collect()
        }
        GroupType::B(m) => {
            let mut r: Vec<Vec<f64>> = (0..m - 1).map(|i| diff(m, i)).collect();
            r.push(unit(m, m - 1));
            r
        }
        GroupType::D(m) => {
            let mut r: Vec<Vec<f64>> = (0..m - 1).map(|i| diff(m, i)).collect();
            let mut last = unit(m, m - 2);
            last[m - 1] = 1.0;
            r.push(last);
            r
        }
        GroupType::F4 => vec![
            vec![0.0, 1.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0, -1.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.5, -0.5, -0.5, -0.5],
        ],
        GroupType::H3 => roots_from_coxeter_matrix(&[vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]]),
        GroupType::H4 => roots_from_coxeter_matrix(&[
            vec![1, 5, 2, 2],
            vec![5, 1, 3, 2],
            vec![2, 3, 1, 3],
            vec![2, 2, 3, 1],
        ]),
        GroupType::I2(k) => roots_from_coxeter_matrix(&[vec![1, k], vec![k, 1]]),
        GroupType::E6 | GroupType::E7 | GroupType::E8 => unreachable!("checked by caller"),
    }
}

fn key(g: &Mat<f64>) -> Vec<i64> {
    let n = g.dim();
    let mut k = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            k.push((g.get(i, j) * DEDUP_SCALE).round() as i64);
        }
    }
    k
}

/// Enumerates the group generated by the simple reflections of `kind`.
pub fn build_group(kind: GroupType) -> Result<ReflectionGroup, GroupError> {
    kind.validate()?;
    if !kind.is_enumerable() {
        return Err(GroupError::EnumerationOutOfScope(kind));
    }
    let generators: Vec<Mat<f64>> = simple_roots(kind).iter().map(|r| reflection(r)).collect();
    let m = kind.rank();
    let id = Mat::identity(m);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(key(&id));
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &generators {
            let h = g.mul(s);
            if seen.insert(key(&h)) {
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(ReflectionGroup {
        kind,
        generators,
        elements,
    })
}
