//! Tube volumes: moment contraction of the Jacobian determinant (extrinsic),
//! Lipschitz-Killing curvatures with radial moments (intrinsic), and a direct
//! Monte Carlo oracle for manifolds with a closed-form nearest-point map.

mod mc;
mod nogo;
mod verdict;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::GroupError;
use crate::diffgeo::{DiffGeoError, Embedding, Evaluator, HdPlan, ManifoldSpec, Signature};
use crate::domains::{moments, Domain, DomainError, MomentTable};
use crate::par;
use crate::poly::{poly_det, rising_even_product, Coeff, Mat, Poly, PolyError};
use crate::quadrature::{tensor_grid, QuadratureSpec};

pub use mc::{focal_bound, tube_volume_mc, McEstimate};
pub use nogo::{
    diamond_codim_gap, diamond_fourfold_invariants, DiamondCodimGap, FourfoldInvariants,
};
pub use verdict::{intrinsicness_verdict, IntrinsicnessVerdict};

#[derive(Debug, Error)]
pub enum TubeError {
    #[error(transparent)]
    Geometry(#[from] DiffGeoError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("domain dimension {domain} does not match the codimension {codim}")]
    DimensionMismatch { codim: usize, domain: usize },
    #[error("radii must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("radii list is empty")]
    NoRadii,
    #[error("radius {radius} times domain circumradius {circumradius} is not below the estimated reach {reach}")]
    BeyondReach {
        radius: f64,
        circumradius: f64,
        reach: f64,
    },
    #[error("the intrinsic formula needs a definite or purely timelike normal bundle; codimension {0} with one timelike normal is mixed")]
    MixedNormalSignature(usize),
    #[error("monte carlo oracle: {0}")]
    MonteCarlo(String),
    #[error("{0}")]
    Invalid(String),
}

/// `det(delta_i^j - sum_p eta_pp t_p h_i^{jp})` as a polynomial in `t`.
///
/// `h_mixed[p]` holds `h_i^{jp}` at `(i, j)`; `eta_normal[p]` is `±1`.
pub fn integrand_poly<C: Coeff>(
    h_mixed: &[Mat<C>],
    eta_normal: &[f64],
) -> Result<Poly<C>, TubeError> {
    let m = h_mixed.len();
    if eta_normal.len() != m {
        return Err(TubeError::Invalid(format!(
            "{} normal signs for {m} second fundamental forms",
            eta_normal.len()
        )));
    }
    let n = h_mixed.first().map_or(0, |h| h.dim());
    let sign = |p: usize| C::from_i64(if eta_normal[p] < 0.0 { -1 } else { 1 });
    let entries: Vec<Vec<Poly<C>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let constant = if i == j { C::one() } else { C::zero() };
                    let lin: Vec<C> = (0..m)
                        .map(|p| -(sign(p) * h_mixed[p].get(i, j).clone()))
                        .collect();
                    Poly::linear(constant, &lin)
                })
                .collect()
        })
        .collect();
    if n == 0 {
        return Ok(Poly::one(m));
    }
    Ok(poly_det(&entries)?)
}

/// `1 / (m (m+2) ... (m+d-2))`.
pub fn weyl_constant(m: usize, d: u32) -> f64 {
    1.0 / rising_even_product(m, d).to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Clone, Debug)]
pub struct TubeOptions {
    pub quadrature: QuadratureSpec,
    /// Constant change of normal frame `n'_p = sum_q Q_pq n_q`.
    pub rotation: Option<DMatrix<f64>>,
    /// Repeat the quadrature on a doubled grid to estimate its error.
    pub estimate_error: bool,
    /// Reject radii at or beyond the estimated reach.
    pub check_reach: bool,
}

impl Default for TubeOptions {
    fn default() -> Self {
        TubeOptions {
            quadrature: QuadratureSpec::default(),
            rotation: None,
            estimate_error: true,
            check_reach: true,
        }
    }
}

/// Coefficients `v_d` of `V(a) = sum_d v_d a^{m+d}` and the resulting volumes.
#[derive(Clone, Debug, Serialize)]
pub struct PathResult {
    pub coefficients: Vec<f64>,
    pub volumes: Vec<f64>,
    /// Quadrature refinement difference plus sampled-moment error, per radius.
    pub error_estimate: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntrinsicResult {
    #[serde(flatten)]
    pub path: PathResult,
    /// `(d, k_d)` for even `d`.
    pub lipschitz_killing: Vec<(usize, f64)>,
    /// `(d, int_D |t|^d dt)` for even `d`.
    pub radial_moments: Vec<(usize, f64)>,
    /// `(-1)^{d/2}` applied for a timelike normal.
    pub alternating_sign: bool,
}

/// Per-grid integrals shared by both paths.
struct Survey {
    area: f64,
    /// `sum_nodes w sqrt(det g) det(...)`, a polynomial in `t`.
    integrand: Poly<f64>,
    /// `int H_d ds` for `d = 0, 2, 4, ..`.
    hd: Vec<f64>,
    max_curvature: f64,
    clamped: bool,
}

fn survey(
    ev: &Evaluator<'_>,
    spec: &QuadratureSpec,
    plans: &[HdPlan],
) -> Result<Survey, TubeError> {
    spec.validate().map_err(DiffGeoError::from)?;
    let emb = ev.embedding();
    let grid = tensor_grid(&emb.chart(), spec);
    let m = emb.codim();
    let eta_normal = ev.eta_normal().to_vec();
    let rows = par::map_slice(&grid, |(u, w)| -> Result<_, TubeError> {
        let node = ev.node(u)?;
        let n = node.n();
        let hm: Vec<Mat<f64>> = node
            .h_mixed
            .iter()
            .map(|h| Mat::from_fn(n, |i, j| h[(i, j)]))
            .collect();
        let dvol = w * node.sqrt_det_g;
        let poly = integrand_poly(&hm, &eta_normal)?.scale(&dvol);
        let hd: Vec<f64> = plans
            .iter()
            .map(|p| dvol * p.contract(&node.riemann))
            .collect();
        // operator norm of each h^p in an orthonormal tangent basis
        let curv2: f64 = node
            .h
            .iter()
            .map(|h| {
                let hh = node.basis.transpose() * h * &node.basis;
                let e = hh.symmetric_eigen().eigenvalues;
                e.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).powi(2)
            })
            .sum();
        Ok((dvol, poly, hd, curv2.sqrt(), node.clamped))
    });
    let mut s = Survey {
        area: 0.0,
        integrand: Poly::zero(m),
        hd: vec![0.0; plans.len()],
        max_curvature: 0.0,
        clamped: false,
    };
    for row in rows {
        let (dvol, poly, hd, curv, clamped) = row?;
        s.area += dvol;
        s.integrand = &s.integrand + &poly;
        for (acc, v) in s.hd.iter_mut().zip(hd) {
            *acc += v;
        }
        s.max_curvature = s.max_curvature.max(curv);
        s.clamped |= clamped;
    }
    Ok(s)
}

fn check_radii(radii: &[f64]) -> Result<(), TubeError> {
    if radii.is_empty() {
        return Err(TubeError::NoRadii);
    }
    match radii.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        Some(&a) => Err(TubeError::BadRadius(a)),
        None => Ok(()),
    }
}

fn evaluate(coefficients: &[f64], m: usize, a: f64) -> f64 {
    coefficients
        .iter()
        .enumerate()
        .map(|(d, v)| v * a.powi((m + d) as i32))
        .sum()
}

/// Everything needed to assemble either path for one embedding and domain.
struct Setup<'a> {
    ev: Evaluator<'a>,
    domain: &'a Domain,
    table: MomentTable,
    plans: Vec<HdPlan>,
    n: usize,
    m: usize,
}

impl<'a> Setup<'a> {
    fn new(
        emb: &'a dyn Embedding,
        domain: &'a Domain,
        opts: &TubeOptions,
    ) -> Result<Self, TubeError> {
        let n = emb.intrinsic_dim();
        let m = emb.codim();
        if domain.dim() != m {
            return Err(TubeError::DimensionMismatch {
                codim: m,
                domain: domain.dim(),
            });
        }
        let table = moments(domain, n as u32)?;
        let plans = (0..=n)
            .step_by(2)
            .map(HdPlan::new)
            .collect::<Result<_, _>>()?;
        let ev = Evaluator::new(emb, opts.rotation.clone())?;
        Ok(Setup {
            ev,
            domain,
            table,
            plans,
            n,
            m,
        })
    }

    fn surveys(&self, opts: &TubeOptions) -> Result<(Survey, Option<Survey>), TubeError> {
        let base = survey(&self.ev, &opts.quadrature, &self.plans)?;
        let refined = if opts.estimate_error {
            Some(survey(&self.ev, &opts.quadrature.refined(), &self.plans)?)
        } else {
            None
        };
        Ok((base, refined))
    }

    fn reach(&self, s: &Survey) -> f64 {
        if s.max_curvature > 0.0 {
            1.0 / s.max_curvature
        } else {
            f64::INFINITY
        }
    }

    fn check_reach(&self, s: &Survey, radii: &[f64], opts: &TubeOptions) -> Result<(), TubeError> {
        check_radii(radii)?;
        if !opts.check_reach {
            return Ok(());
        }
        let reach = self.reach(s);
        let circumradius = self.domain.circumradius();
        for &a in radii {
            if a * circumradius >= reach {
                return Err(TubeError::BeyondReach {
                    radius: a,
                    circumradius,
                    reach,
                });
            }
        }
        Ok(())
    }

    /// `(v_d, moment error weight_d)` from the integrand polynomial.
    fn extrinsic_coefficients(&self, s: &Survey) -> (Vec<f64>, Vec<f64>) {
        let mut v = vec![0.0; self.n + 1];
        let mut err = vec![0.0; self.n + 1];
        for (alpha, q) in s.integrand.terms() {
            let d = alpha.degree() as usize;
            let mo = self.table.get(alpha);
            v[d] += q * mo.value();
            err[d] += q.abs() * mo.std_err();
        }
        (v, err)
    }

    fn extrinsic(&self, base: &Survey, refined: Option<&Survey>, radii: &[f64]) -> PathResult {
        let (coefficients, moment_err) = self.extrinsic_coefficients(base);
        let refined = refined.map(|r| self.extrinsic_coefficients(r).0);
        self.path(coefficients, refined, moment_err, radii)
    }

    fn path(
        &self,
        coefficients: Vec<f64>,
        refined: Option<Vec<f64>>,
        moment_err: Vec<f64>,
        radii: &[f64],
    ) -> PathResult {
        let m = self.m;
        let volumes: Vec<f64> = radii
            .iter()
            .map(|&a| evaluate(&coefficients, m, a))
            .collect();
        let error_estimate = radii
            .iter()
            .zip(&volumes)
            .map(|(&a, v)| {
                let quad = refined
                    .as_ref()
                    .map_or(0.0, |r| (evaluate(r, m, a) - v).abs());
                quad + evaluate(&moment_err, m, a)
            })
            .collect();
        PathResult {
            coefficients,
            volumes,
            error_estimate,
        }
    }

    fn intrinsic_sign(&self) -> Result<bool, TubeError> {
        let timelike = self.ev.eta_normal().iter().any(|&e| e < 0.0);
        match (timelike, self.m) {
            (false, _) => Ok(false),
            (true, 1) => Ok(true),
            (true, m) => Err(TubeError::MixedNormalSignature(m)),
        }
    }

    fn intrinsic_coefficients(
        &self,
        s: &Survey,
        alternating: bool,
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<(usize, f64)>), TubeError> {
        let mut v = vec![0.0; self.n + 1];
        let mut err = vec![0.0; self.n + 1];
        let mut rho = Vec::new();
        for (k, p) in self.plans.iter().enumerate() {
            let d = p.degree();
            let moment = self.table.radial(d as u32)?;
            let sign = if alternating && (d / 2) % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            let c = sign * weyl_constant(self.m, d as u32);
            v[d] = c * moment.value() * s.hd[k];
            err[d] = (c * s.hd[k]).abs() * moment.std_err();
            rho.push((d, moment.value()));
        }
        Ok((v, err, rho))
    }

    fn intrinsic(
        &self,
        base: &Survey,
        refined: Option<&Survey>,
        radii: &[f64],
    ) -> Result<IntrinsicResult, TubeError> {
        let alternating = self.intrinsic_sign()?;
        let (coefficients, moment_err, radial_moments) =
            self.intrinsic_coefficients(base, alternating)?;
        let refined = match refined {
            Some(r) => Some(self.intrinsic_coefficients(r, alternating)?.0),
            None => None,
        };
        Ok(IntrinsicResult {
            path: self.path(coefficients, refined, moment_err, radii),
            lipschitz_killing: self
                .plans
                .iter()
                .map(|p| p.degree())
                .zip(base.hd.iter().copied())
                .collect(),
            radial_moments,
            alternating_sign: alternating,
        })
    }
}

/// Tube volumes from the moment contraction of the Jacobian determinant.
pub fn tube_volume_extrinsic(
    emb: &dyn Embedding,
    domain: &Domain,
    radii: &[f64],
    opts: &TubeOptions,
) -> Result<PathResult, TubeError> {
    check_radii(radii)?;
    let setup = Setup::new(emb, domain, opts)?;
    let (base, refined) = setup.surveys(opts)?;
    setup.check_reach(&base, radii, opts)?;
    Ok(setup.extrinsic(&base, refined.as_ref(), radii))
}

/// Tube volumes from the Lipschitz-Killing curvatures `k_d` (Christoffel
/// path) and the radial moments of the domain.
pub fn tube_volume_intrinsic(
    emb: &dyn Embedding,
    domain: &Domain,
    radii: &[f64],
    opts: &TubeOptions,
) -> Result<IntrinsicResult, TubeError> {
    check_radii(radii)?;
    let setup = Setup::new(emb, domain, opts)?;
    setup.intrinsic_sign()?;
    let (base, refined) = setup.surveys(opts)?;
    setup.check_reach(&base, radii, opts)?;
    setup.intrinsic(&base, refined.as_ref(), radii)
}

/// Direct sampling request for [`tube_report`].
#[derive(Clone, Debug)]
pub struct McRequest {
    pub manifold: ManifoldSpec,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct V0Check {
    pub expected: f64,
    pub coefficient: f64,
    pub defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TubeReport {
    pub manifold: String,
    pub signature: Signature,
    pub intrinsic_dim: usize,
    pub codim: usize,
    pub domain: String,
    pub radii: Vec<f64>,
    pub area: f64,
    pub reach: f64,
    pub clamped: bool,
    pub verdict: IntrinsicnessVerdict,
    pub extrinsic: PathResult,
    pub intrinsic: Option<IntrinsicResult>,
    /// Why the intrinsic path was not evaluated.
    pub intrinsic_skipped: Option<String>,
    pub monte_carlo: Vec<McEstimate>,
    pub v0_check: V0Check,
    /// Largest `|v_d|` over odd `d`; zero for centrally symmetric exact domains.
    pub max_odd_coefficient: f64,
    /// `max_a |V_ext - V_int| / |V_ext|` when both paths ran.
    pub max_relative_discrepancy: Option<f64>,
}

/// Both volume paths, optional Monte Carlo, and the consistency checks.
pub fn tube_report(
    emb: &dyn Embedding,
    domain: &Domain,
    radii: &[f64],
    opts: &TubeOptions,
    mc: Option<&McRequest>,
) -> Result<TubeReport, TubeError> {
    check_radii(radii)?;
    let setup = Setup::new(emb, domain, opts)?;
    let (base, refined) = setup.surveys(opts)?;
    setup.check_reach(&base, radii, opts)?;
    let extrinsic = setup.extrinsic(&base, refined.as_ref(), radii);
    let (intrinsic, intrinsic_skipped) = match setup.intrinsic(&base, refined.as_ref(), radii) {
        Ok(r) => (Some(r), None),
        Err(e @ TubeError::MixedNormalSignature(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let monte_carlo = match mc {
        Some(req) => radii
            .iter()
            .map(|&a| tube_volume_mc(&req.manifold, domain, a, req.samples, req.seed))
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let expected = domain.volume()? * base.area;
    let coefficient = extrinsic.coefficients[0];
    let max_odd_coefficient = extrinsic
        .coefficients
        .iter()
        .skip(1)
        .step_by(2)
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let max_relative_discrepancy = intrinsic.as_ref().map(|i| {
        extrinsic
            .volumes
            .iter()
            .zip(&i.path.volumes)
            .map(|(e, v)| (e - v).abs() / e.abs())
            .fold(0.0, f64::max)
    });
    Ok(TubeReport {
        manifold: emb.label(),
        signature: emb.signature(),
        intrinsic_dim: setup.n,
        codim: setup.m,
        domain: domain.label(),
        radii: radii.to_vec(),
        area: base.area,
        reach: setup.reach(&base),
        clamped: base.clamped,
        verdict: intrinsicness_verdict(domain, setup.n as u32)?,
        extrinsic,
        intrinsic,
        intrinsic_skipped,
        monte_carlo,
        v0_check: V0Check {
            expected,
            coefficient,
            defect: (expected - coefficient).abs(),
        },
        max_odd_coefficient,
        max_relative_discrepancy,
    })
}

#[cfg(test)]
mod tests;
