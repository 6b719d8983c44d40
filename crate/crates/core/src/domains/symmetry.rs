use num_integer::Integer;
use serde::Serialize;

use super::{moments, Domain, DomainError, TrigSeries};
use crate::poly::{sphere_moment, Coeff, MultiIndex};

/// Largest degree accepted by [`symmetric_of_degree`].
pub const MAX_SYMMETRY_DEGREE: u32 = 10;

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub domain: String,
    pub degree: u32,
    pub symmetric: bool,
    /// Largest normalized defect over all checked monomials.
    pub max_defect: f64,
    #[serde(serialize_with = "serialize_alpha")]
    pub worst: Option<MultiIndex>,
}

fn serialize_alpha<S: serde::Serializer>(a: &Option<MultiIndex>, s: S) -> Result<S::Ok, S::Error> {
    match a {
        Some(a) => s.collect_seq(a.exponents()),
        None => s.serialize_none(),
    }
}

/// Checks `int_D t^alpha = S_m(alpha) * int_D |t|^{|alpha|}` for every `|alpha| <= n`,
/// where `S_m` is the unit-sphere average. Defects are divided by
/// `vol(D) * circumradius^{|alpha|}` before comparing against `tol`.
pub fn symmetric_of_degree(
    domain: &Domain,
    n: u32,
    tol: f64,
) -> Result<SymmetryReport, DomainError> {
    if n > MAX_SYMMETRY_DEGREE {
        return Err(DomainError::DegreeTooLarge(n));
    }
    let table = moments(domain, n + n % 2)?;
    let m = table.m;
    let vol = table.volume().value();
    let r = domain.circumradius();
    let mut max_defect: f64 = 0.0;
    let mut worst = None;
    for d in 1..=n {
        let rho = if d % 2 == 0 {
            table.radial(d)?.value()
        } else {
            0.0
        };
        let scale = vol * r.powi(d as i32);
        for alpha in MultiIndex::of_degree(m, d) {
            let target = if d % 2 == 0 {
                sphere_moment(m, &alpha).to_f64() * rho
            } else {
                0.0
            };
            let defect = (table.get(&alpha).value() - target).abs() / scale;
            if defect > max_defect || worst.is_none() {
                max_defect = max_defect.max(defect);
                worst = Some(alpha);
            }
        }
    }
    Ok(SymmetryReport {
        domain: domain.label(),
        degree: n,
        symmetric: max_defect <= tol,
        max_defect,
        worst,
    })
}

/// Planar domain `0 <= r <= b(phi) (2 + cos(p phi))` whose moments are
/// rotation invariant up to degree `n` although its symmetry group can be small.
pub fn build_radial_counterexample(
    n: u32,
    p: u32,
    q: u32,
    b: &TrigSeries,
) -> Result<Domain, DomainError> {
    let fail = |s: String| Err(DomainError::Constraint(s));
    if p <= n {
        return fail(format!("need p > n, got p={p}, n={n}"));
    }
    if q <= (n + 3) * p {
        return fail(format!("need q > (n+3)p = {}, got q={q}", (n + 3) * p));
    }
    if p.gcd(&q) != 1 {
        return fail(format!(
            "need gcd(p, q) = 1, got gcd({p}, {q}) = {}",
            p.gcd(&q)
        ));
    }
    if let Some(&(k, _, _)) = b.modes.iter().find(|(k, _, _)| k % q != 0) {
        return fail(format!(
            "b has Fourier mode {k}, which is not a multiple of q={q}"
        ));
    }
    let bump = TrigSeries::new(2.0, vec![(p, 1.0, 0.0)]);
    let d = Domain::Radial2D(b.mul(&bump));
    match d.validate() {
        Err(DomainError::NonPositiveProfile(v)) => fail(format!("b must be positive, minimum {v}")),
        Err(e) => Err(e),
        Ok(()) => Ok(d),
    }
}
