use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::beta::beta;

use super::{polygon_vertices, radial_grid, sphere_area, Domain, DomainError, SampledDomain};
use crate::par;
use crate::poly::{rat, sphere_moment, Coeff, MultiIndex, Rat};

pub const MAX_MOMENT_DEGREE: u32 = 12;

const MC_BATCH: u64 = 10_000;

/// A single domain moment `int_D t^alpha dt` with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub enum Moment {
    /// Exact rational value.
    Exact(Rat),
    /// `ratio * unit`, with `ratio` exact and `unit` a transcendental
    /// constant such as a sphere area.
    Scaled { ratio: Rat, unit: f64 },
    /// Closed form or deterministic quadrature evaluated in floating point.
    Float(f64),
    /// Rejection-sampling estimate.
    Sampled { value: f64, std_err: f64 },
}

impl Moment {
    pub fn value(&self) -> f64 {
        match self {
            Moment::Exact(r) => r.to_f64(),
            Moment::Scaled { ratio, unit } => ratio.to_f64() * unit,
            Moment::Float(v) => *v,
            Moment::Sampled { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Moment::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Moment::Exact(_))
    }

    pub fn std_err(&self) -> f64 {
        match self {
            Moment::Sampled { std_err, .. } => *std_err,
            _ => 0.0,
        }
    }

    fn is_exact_zero(&self) -> bool {
        match self {
            Moment::Exact(r) => r.is_zero(),
            Moment::Scaled { ratio, .. } => ratio.is_zero(),
            _ => false,
        }
    }

    /// `sum_i w_i * M_i`, staying exact or scaled whenever every nonzero term allows it.
    pub fn combine<'a>(terms: impl IntoIterator<Item = (Rat, &'a Moment)>) -> Moment {
        let terms: Vec<(Rat, &Moment)> = terms
            .into_iter()
            .filter(|(w, m)| !w.is_zero() && !m.is_exact_zero())
            .collect();
        if terms.is_empty() {
            return Moment::Exact(Rat::zero());
        }
        if terms.iter().all(|(_, m)| m.is_exact()) {
            let sum = terms
                .iter()
                .fold(Rat::zero(), |acc, (w, m)| acc + w * m.exact().unwrap());
            return Moment::Exact(sum);
        }
        if let Moment::Scaled { unit, .. } = terms[0].1 {
            let same_unit = terms
                .iter()
                .all(|(_, m)| matches!(m, Moment::Scaled { unit: u, .. } if u == unit));
            if same_unit {
                let ratio = terms.iter().fold(Rat::zero(), |acc, (w, m)| match m {
                    Moment::Scaled { ratio, .. } => acc + w * ratio,
                    _ => unreachable!(),
                });
                return Moment::Scaled { ratio, unit: *unit };
            }
        }
        let value = terms.iter().map(|(w, m)| w.to_f64() * m.value()).sum();
        if terms
            .iter()
            .any(|(_, m)| matches!(m, Moment::Sampled { .. }))
        {
            // errors of sampled moments share draws, so add magnitudes
            let std_err = terms
                .iter()
                .map(|(w, m)| w.to_f64().abs() * m.std_err())
                .sum();
            Moment::Sampled { value, std_err }
        } else {
            Moment::Float(value)
        }
    }
}

impl Serialize for Moment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Moment", 3)?;
        st.serialize_field("value", &self.value())?;
        match self {
            Moment::Exact(r) => {
                st.serialize_field("exact", &format!("{}/{}", r.numer(), r.denom()))?;
            }
            Moment::Scaled { ratio, unit } => {
                st.serialize_field(
                    "exact_ratio",
                    &format!("{}/{}", ratio.numer(), ratio.denom()),
                )?;
                st.serialize_field("unit", unit)?;
            }
            Moment::Float(_) => {}
            Moment::Sampled { std_err, .. } => st.serialize_field("std_err", std_err)?,
        }
        st.end()
    }
}

/// All moments `int_D t^alpha dt` with `|alpha| <= max_degree`.
#[derive(Clone, Debug, Serialize)]
pub struct MomentTable {
    pub domain: String,
    pub m: usize,
    pub max_degree: u32,
    #[serde(serialize_with = "serialize_entries")]
    entries: BTreeMap<MultiIndex, Moment>,
}

fn serialize_entries<S: serde::Serializer>(
    entries: &BTreeMap<MultiIndex, Moment>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Entry<'a> {
        alpha: &'a [u32],
        #[serde(flatten)]
        moment: &'a Moment,
    }
    let mut seq = s.serialize_seq(Some(entries.len()))?;
    for (a, m) in entries {
        seq.serialize_element(&Entry {
            alpha: a.exponents(),
            moment: m,
        })?;
    }
    seq.end()
}

impl MomentTable {
    /// Panics if `alpha` is outside the table; check `max_degree` first.
    pub fn get(&self, alpha: &MultiIndex) -> &Moment {
        self.entries
            .get(alpha)
            .unwrap_or_else(|| panic!("moment {alpha} not in table of degree {}", self.max_degree))
    }

    pub fn try_get(&self, alpha: &MultiIndex) -> Option<&Moment> {
        self.entries.get(alpha)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Moment)> {
        self.entries.iter()
    }

    pub fn volume(&self) -> &Moment {
        self.get(&MultiIndex::zero(self.m))
    }

    /// `int_D |t|^d dt` via the multinomial expansion of `(t_1^2 + ... + t_m^2)^{d/2}`.
    pub fn radial(&self, d: u32) -> Result<Moment, DomainError> {
        if d % 2 == 1 {
            return Err(DomainError::OddRadialDegree(d));
        }
        if d > self.max_degree {
            return Err(DomainError::DegreeTooLarge(d));
        }
        let half = d / 2;
        let fact = |k: u32| (1..=k).fold(BigInt::one(), |acc, j| acc * j);
        let terms: Vec<(Rat, &Moment)> = MultiIndex::of_degree(self.m, half)
            .into_iter()
            .map(|beta| {
                let mut w = fact(half);
                for &b in beta.exponents() {
                    w /= fact(b);
                }
                let alpha = MultiIndex::new(beta.exponents().iter().map(|b| 2 * b).collect());
                (Rat::from_integer(w), self.get(&alpha))
            })
            .collect();
        Ok(Moment::combine(terms))
    }
}

/// Moment table of `domain` up to total degree `max_degree`.
pub fn moments(domain: &Domain, max_degree: u32) -> Result<MomentTable, DomainError> {
    if max_degree > MAX_MOMENT_DEGREE {
        return Err(DomainError::DegreeTooLarge(max_degree));
    }
    domain.validate()?;
    let m = domain.dim();
    let indices = MultiIndex::up_to_degree(m, max_degree);
    let entries: BTreeMap<MultiIndex, Moment> = match domain {
        Domain::Radial2D(a) => {
            let n = radial_grid(a, max_degree);
            let samples: Vec<(f64, f64, f64)> = (0..n)
                .map(|i| {
                    let phi = 2.0 * PI * i as f64 / n as f64;
                    (phi.cos(), phi.sin(), a.eval(phi))
                })
                .collect();
            let h = 2.0 * PI / n as f64;
            indices
                .into_iter()
                .map(|alpha| {
                    let (p, q) = (alpha.exponents()[0] as i32, alpha.exponents()[1] as i32);
                    let d = p + q;
                    let s: f64 = samples
                        .iter()
                        .map(|&(c, s, r)| c.powi(p) * s.powi(q) * r.powi(d + 2))
                        .sum();
                    (alpha, Moment::Float(h * s / (d + 2) as f64))
                })
                .collect()
        }
        Domain::MonteCarlo(s) => sampled_moments(s, indices),
        _ => indices
            .into_iter()
            .map(|alpha| {
                let mo = closed_form(domain, &alpha);
                (alpha, mo)
            })
            .collect(),
    };
    Ok(MomentTable {
        domain: domain.label(),
        m,
        max_degree,
        entries,
    })
}

/// `int_D |t|^d dt` for even `d`.
pub fn radial_moment(domain: &Domain, d: u32) -> Result<Moment, DomainError> {
    if d % 2 == 1 {
        return Err(DomainError::OddRadialDegree(d));
    }
    moments(domain, d)?.radial(d)
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * j)
}

/// `int_{B^k} x^beta dx / omega_k`, the exact part of a ball moment.
fn ball_ratio(beta: &MultiIndex) -> Rat {
    let k = beta.len();
    sphere_moment(k, beta) / Rat::from_integer(BigInt::from(k as u64 + beta.degree() as u64))
}

/// Diamond moment divided by `omega_{m-1}` (sphere area in the hyperplane),
/// from slicing along `t_m`:
/// `2 B(alpha_m + 1, m + |alpha'|) * int_{B^{m-1}} x^{alpha'} dx / omega_{m-1}`.
pub fn diamond_moment_ratio(m: usize, alpha: &MultiIndex) -> Rat {
    assert!(m >= 2, "diamond slicing needs m >= 2");
    let e = alpha.exponents();
    let last = e[m - 1];
    if last % 2 == 1 {
        return Rat::zero();
    }
    let rest = MultiIndex::new(e[..m - 1].to_vec());
    let k = (m - 1) as u32 + rest.degree();
    let slice = Rat::new(
        BigInt::from(2) * factorial(last) * factorial(k),
        factorial(last + k + 1),
    );
    slice * ball_ratio(&rest)
}

fn closed_form(domain: &Domain, alpha: &MultiIndex) -> Moment {
    let e = alpha.exponents();
    match domain {
        Domain::Ball { m } => {
            let ratio = ball_ratio(alpha);
            if *m == 1 {
                Moment::Exact(ratio * rat(2, 1))
            } else {
                Moment::Scaled {
                    ratio,
                    unit: sphere_area(*m),
                }
            }
        }
        Domain::Cube { .. } => Moment::Exact(e.iter().fold(Rat::one(), |acc, &a| {
            if a % 2 == 1 {
                Rat::zero()
            } else {
                acc * rat(2, a as i64 + 1)
            }
        })),
        Domain::CrossPolytope { m } => {
            if !alpha.all_even() {
                return Moment::Exact(Rat::zero());
            }
            // 2^m times the Dirichlet integral over the standard simplex
            let num = e
                .iter()
                .fold(BigInt::from(2).pow(*m as u32), |acc, &a| acc * factorial(a));
            Moment::Exact(Rat::new(num, factorial(alpha.degree() + *m as u32)))
        }
        Domain::Diamond { m } => {
            if *m == 1 {
                return closed_form(&Domain::Cube { m: 1 }, alpha);
            }
            let ratio = diamond_moment_ratio(*m, alpha);
            if *m == 2 {
                Moment::Exact(ratio * rat(2, 1))
            } else {
                Moment::Scaled {
                    ratio,
                    unit: sphere_area(m - 1),
                }
            }
        }
        Domain::RegularPolygon { k } => polygon_moment(*k, e[0], e[1]),
        Domain::ConeBall { m, b } => Moment::Float(cone_ball_moment(*m, *b, alpha)),
        Domain::Radial2D(_) | Domain::MonteCarlo(_) => unreachable!("handled by table builder"),
    }
}

/// `int_T x^p y^q` over the triangle `(0, a, b)`: substitute `t = u a + v b`
/// and integrate monomials over the standard simplex, `int u^i v^j = i! j! / (i+j+2)!`.
fn triangle_moment<C: Coeff>(a: [C; 2], b: [C; 2], p: u32, q: u32) -> C {
    let det = a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
    let det = if det.to_f64() < 0.0 { -det } else { det };
    // x = u a0 + v b0, y = u a1 + v b1
    let binom = |n: u32, k: u32| factorial(n) / (factorial(k) * factorial(n - k));
    let pow = |c: &C, k: u32| (0..k).fold(C::one(), |acc, _| acc * c.clone());
    let mut total = C::zero();
    for i in 0..=p {
        for j in 0..=q {
            // u-exponent (i + j), v-exponent (p - i + q - j)
            let cu = pow(&a[0], i) * pow(&b[0], p - i) * pow(&a[1], j) * pow(&b[1], q - j);
            let bc = Rat::from_integer(binom(p, i) * binom(q, j));
            let (eu, ev) = (i + j, p - i + q - j);
            let simplex = Rat::new(factorial(eu) * factorial(ev), factorial(eu + ev + 2));
            total = total + cu * C::from_rat(&(bc * simplex));
        }
    }
    total * det
}

fn polygon_moment(k: usize, p: u32, q: u32) -> Moment {
    if k == 4 {
        // vertices (1,0), (0,1), (-1,0), (0,-1) are rational
        let v: [[Rat; 2]; 4] = [
            [rat(1, 1), rat(0, 1)],
            [rat(0, 1), rat(1, 1)],
            [rat(-1, 1), rat(0, 1)],
            [rat(0, 1), rat(-1, 1)],
        ];
        let total = (0..4).fold(Rat::zero(), |acc, j| {
            acc + triangle_moment(v[j].clone(), v[(j + 1) % 4].clone(), p, q)
        });
        return Moment::Exact(total);
    }
    let v = polygon_vertices(k);
    let total: f64 = (0..k)
        .map(|j| triangle_moment(v[j], v[(j + 1) % k], p, q))
        .sum();
    Moment::Float(total)
}

fn cone_ball_moment(m: usize, b: f64, alpha: &MultiIndex) -> f64 {
    let e = alpha.exponents();
    let a = e[0];
    let rest = MultiIndex::new(e[1..].to_vec());
    if !rest.all_even() {
        return 0.0;
    }
    let c = (m - 1) as f64 + rest.degree() as f64;
    let ball_factor = if m == 1 {
        1.0
    } else {
        ball_ratio(&rest).to_f64() * sphere_area(m - 1)
    };
    let sign = if a % 2 == 1 { -1.0 } else { 1.0 };
    let half_ball = sign * 0.5 * beta((a as f64 + 1.0) / 2.0, c / 2.0 + 1.0);
    let cone = b.powi(a as i32 + 1) * beta(a as f64 + 1.0, c + 1.0);
    (half_ball + cone) * ball_factor
}

fn sampled_moments(s: &SampledDomain, indices: Vec<MultiIndex>) -> BTreeMap<MultiIndex, Moment> {
    let m = s.m;
    let r = s.bounding_radius;
    let batches = s.samples.div_ceil(MC_BATCH);
    let k = indices.len();
    let partial = par::map_range(batches as usize, |bi| {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        rng.set_stream(bi as u64);
        let count = MC_BATCH.min(s.samples - bi as u64 * MC_BATCH);
        let mut sum = vec![0.0; k];
        let mut sum2 = vec![0.0; k];
        let mut t = vec![0.0; m];
        for _ in 0..count {
            for x in t.iter_mut() {
                *x = rng.random_range(-r..=r);
            }
            if !(s.predicate)(&t) {
                continue;
            }
            for (i, alpha) in indices.iter().enumerate() {
                let v = alpha.eval(&t);
                sum[i] += v;
                sum2[i] += v * v;
            }
        }
        (sum, sum2)
    });
    let n = s.samples as f64;
    let box_vol = (2.0 * r).powi(m as i32);
    let mut sum = vec![0.0; k];
    let mut sum2 = vec![0.0; k];
    for (a, b) in partial {
        for i in 0..k {
            sum[i] += a[i];
            sum2[i] += b[i];
        }
    }
    indices
        .into_iter()
        .enumerate()
        .map(|(i, alpha)| {
            let mean = sum[i] / n;
            let var = (sum2[i] / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
            (
                alpha,
                Moment::Sampled {
                    value: box_vol * mean,
                    std_err: box_vol * (var / n).sqrt(),
                },
            )
        })
        .collect()
}
