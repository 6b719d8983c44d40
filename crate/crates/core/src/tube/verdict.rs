use serde::Serialize;

use super::TubeError;
use crate::coxeter::GroupType;
use crate::domains::{symmetric_of_degree, Domain, SymmetryReport, MAX_SYMMETRY_DEGREE};

/// Normalized moment defect accepted as symmetric.
const MOMENT_TOL: f64 = 1e-10;

/// Whether the extrinsic tube volume must agree with the intrinsic formula
/// for every `n`-dimensional submanifold.
#[derive(Clone, Debug, Serialize)]
pub struct IntrinsicnessVerdict {
    pub domain: String,
    pub n: u32,
    pub guaranteed: bool,
    /// `rotation_invariant`, `reflection_group`, `moment_symmetric` or `none`.
    pub criterion: String,
    pub group: Option<String>,
    pub orthogonal_degree: Option<u32>,
    pub symmetry: Option<SymmetryReport>,
    pub detail: String,
}

/// Known reflection group of the domain, if any, with the degree up to which
/// its invariants are polynomials in `|t|^2` alone.
fn reflection_group(domain: &Domain) -> Option<(GroupType, u32)> {
    let kind = match domain {
        Domain::RegularPolygon { k } => GroupType::I2(*k),
        Domain::Cube { m } | Domain::CrossPolytope { m } if *m >= 2 => GroupType::B(*m),
        Domain::Diamond { m: 2 } => GroupType::B(2),
        _ => return None,
    };
    // second-smallest basic invariant degree minus one
    let d2 = kind.degrees().get(1).copied()?;
    Some((kind, d2 - 1))
}

pub fn intrinsicness_verdict(domain: &Domain, n: u32) -> Result<IntrinsicnessVerdict, TubeError> {
    domain.validate()?;
    let symmetry = if n <= MAX_SYMMETRY_DEGREE && !matches!(domain, Domain::MonteCarlo(_)) {
        Some(symmetric_of_degree(domain, n, MOMENT_TOL)?)
    } else {
        None
    };
    let mut v = IntrinsicnessVerdict {
        domain: domain.label(),
        n,
        guaranteed: false,
        criterion: "none".into(),
        group: None,
        orthogonal_degree: None,
        symmetry,
        detail: String::new(),
    };
    let interval = domain.dim() == 1 && domain.is_centrally_symmetric();
    if matches!(domain, Domain::Ball { .. }) || interval {
        v.guaranteed = true;
        v.criterion = "rotation_invariant".into();
        v.detail = "the domain is invariant under the full orthogonal group".into();
        return Ok(v);
    }
    if let Some((kind, degree)) = reflection_group(domain) {
        v.group = Some(kind.to_string());
        v.orthogonal_degree = Some(degree);
        // odd moments vanish on centrally symmetric domains, covering one more degree
        let reach = if domain.is_centrally_symmetric() && degree % 2 == 0 {
            degree + 1
        } else {
            degree
        };
        if n <= reach {
            v.guaranteed = true;
            v.criterion = "reflection_group".into();
            v.detail = format!("{kind} is orthogonal of degree {degree} >= n = {n}");
            return Ok(v);
        }
    }
    match &v.symmetry {
        Some(s) if s.symmetric => {
            v.guaranteed = true;
            v.criterion = "moment_symmetric".into();
            v.detail = format!(
                "moments are rotation invariant up to degree {n} (defect {:e})",
                s.max_defect
            );
        }
        Some(s) => {
            v.detail = format!(
                "not guaranteed intrinsic: moment defect {:e} at {}",
                s.max_defect,
                s.worst.as_ref().map_or("-".into(), |a| a.to_string())
            );
        }
        None => {
            v.detail = "not guaranteed intrinsic: sampled moments cannot certify symmetry".into();
        }
    }
    Ok(v)
}
