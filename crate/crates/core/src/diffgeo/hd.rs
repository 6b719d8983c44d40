use crate::poly::Coeff;

use super::DiffGeoError;

/// Components `R_ij^{kl}` of a curvature tensor on an n-dimensional manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<C> {
    n: usize,
    data: Vec<C>,
}

impl<C: Coeff> CurvatureTensor<C> {
    pub fn zero(n: usize) -> Self {
        CurvatureTensor {
            n,
            data: vec![C::zero(); n * n * n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> C) -> Self {
        let mut t = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let x = t.idx(i, j, k, l);
                        t.data[x] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }

    /// Constant curvature one: `R_ij^{kl} = delta_i^k delta_j^l - delta_j^k delta_i^l`.
    pub fn identity(n: usize) -> Self {
        let d = |a: usize, b: usize| if a == b { C::one() } else { C::zero() };
        Self::from_fn(n, |i, j, k, l| d(i, k) * d(j, l) - d(j, k) * d(i, l))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &C {
        &self.data[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: C) {
        let x = self.idx(i, j, k, l);
        self.data[x] = v;
    }

    /// `sum_{i,j} R_ij^{ij}`.
    pub fn scalar_curvature(&self) -> C {
        let mut s = C::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s = s + self.get(i, j, i, j).clone();
            }
        }
        s
    }

    /// Largest absolute componentwise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }
}

/// All perfect matchings of `0..d`, pairs ascending and listed by first element.
fn pairings(d: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if rest.is_empty() {
            return vec![vec![]];
        }
        let first = rest[0];
        let mut out = Vec::new();
        for k in 1..rest.len() {
            let mut remaining: Vec<usize> = rest[1..].to_vec();
            remaining.remove(k - 1);
            for mut tail in rec(&remaining) {
                tail.insert(0, (first, rest[k]));
                out.push(tail);
            }
        }
        out
    }
    rec(&(0..d).collect::<Vec<_>>())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Sign of the permutation taking sequence `from` to sequence `to`.
fn relative_sign(from: &[usize], to: &[usize]) -> i64 {
    let pos: Vec<usize> = to
        .iter()
        .map(|x| from.iter().position(|y| y == x).expect("same elements"))
        .collect();
    let mut inv = 0;
    for a in 0..pos.len() {
        for b in a + 1..pos.len() {
            if pos[a] > pos[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Precomputed block couplings for `H_d`: each entry pairs a canonical lower
/// pairing with an ordered sequence of upper pairs, plus the sign.
#[derive(Clone, Debug)]
pub struct HdPlan {
    d: usize,
    terms: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>, i64)>,
}

impl HdPlan {
    pub fn new(d: usize) -> Result<Self, DiffGeoError> {
        if d % 2 == 1 {
            return Err(DiffGeoError::OddDegree(d));
        }
        let pairs = pairings(d);
        let perms = permutations(d / 2);
        let mut terms = Vec::new();
        for lower in &pairs {
            let lower_seq: Vec<usize> = lower.iter().flat_map(|&(a, b)| [a, b]).collect();
            for upper in &pairs {
                for perm in &perms {
                    let ordered: Vec<(usize, usize)> = perm.iter().map(|&k| upper[k]).collect();
                    let upper_seq: Vec<usize> = ordered.iter().flat_map(|&(a, b)| [a, b]).collect();
                    terms.push((
                        lower.clone(),
                        ordered,
                        relative_sign(&lower_seq, &upper_seq),
                    ));
                }
            }
        }
        Ok(HdPlan { d, terms })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `H_d` of the given curvature: sum over index subsets of size `d` and
    /// all block couplings of signed products of curvature components.
    pub fn contract<C: Coeff>(&self, r: &CurvatureTensor<C>) -> C {
        let n = r.dim();
        if self.d == 0 {
            return C::one();
        }
        let mut total = C::zero();
        for subset in subsets(n, self.d) {
            for (lower, upper, sign) in &self.terms {
                let mut prod = C::from_i64(*sign);
                for (lp, up) in lower.iter().zip(upper) {
                    let v = r.get(subset[lp.0], subset[lp.1], subset[up.0], subset[up.1]);
                    if v.is_zero() {
                        prod = C::zero();
                        break;
                    }
                    prod = prod * v.clone();
                }
                if !prod.is_zero() {
                    total = total + prod;
                }
            }
        }
        total
    }
}

fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// `H_d` for a single curvature tensor; see [`HdPlan`] to reuse the couplings.
pub fn contract_hd<C: Coeff>(r: &CurvatureTensor<C>, d: usize) -> Result<C, DiffGeoError> {
    Ok(HdPlan::new(d)?.contract(r))
}
