use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Domain, DomainError, SampledDomain, TrigSeries};

/// JSON descriptor of a domain, e.g. `{"kind": "diamond", "m": 3}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Ball {
        m: usize,
    },
    Cube {
        m: usize,
    },
    CrossPolytope {
        m: usize,
    },
    Diamond {
        m: usize,
    },
    RegularPolygon {
        k: usize,
    },
    ConeBall {
        m: usize,
        b: f64,
    },
    Radial2d {
        constant: f64,
        #[serde(default)]
        modes: Vec<(u32, f64, f64)>,
    },
    /// Rejection-sampled moments of another domain's membership test.
    MonteCarlo {
        of: Box<DomainSpec>,
        #[serde(default)]
        bounding_radius: Option<f64>,
        samples: u64,
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl DomainSpec {
    /// Builds and validates the domain. `seed_override` replaces any seed
    /// given in a `monte_carlo` descriptor.
    pub fn to_domain(&self, seed_override: Option<u64>) -> Result<Domain, DomainError> {
        let d = match self {
            DomainSpec::Ball { m } => Domain::Ball { m: *m },
            DomainSpec::Cube { m } => Domain::Cube { m: *m },
            DomainSpec::CrossPolytope { m } => Domain::CrossPolytope { m: *m },
            DomainSpec::Diamond { m } => Domain::Diamond { m: *m },
            DomainSpec::RegularPolygon { k } => Domain::RegularPolygon { k: *k },
            DomainSpec::ConeBall { m, b } => Domain::ConeBall { m: *m, b: *b },
            DomainSpec::Radial2d { constant, modes } => {
                Domain::Radial2D(TrigSeries::new(*constant, modes.clone()))
            }
            DomainSpec::MonteCarlo {
                of,
                bounding_radius,
                samples,
                seed,
            } => {
                let inner = of.to_domain(None)?;
                if matches!(inner, Domain::MonteCarlo(_)) {
                    return Err(DomainError::Invalid("nested monte_carlo domains".into()));
                }
                let seed = seed_override.or(*seed).ok_or_else(|| {
                    DomainError::Invalid("monte_carlo domain needs a seed".into())
                })?;
                let label = inner.label();
                let m = inner.dim();
                let bounding_radius = bounding_radius.unwrap_or_else(|| inner.circumradius());
                Domain::MonteCarlo(SampledDomain {
                    m,
                    label,
                    bounding_radius,
                    samples: *samples,
                    seed,
                    predicate: Arc::new(move |t: &[f64]| inner.contains(t).unwrap_or(false)),
                })
            }
        };
        d.validate()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_descriptors() {
        let d: DomainSpec = serde_json::from_str(r#"{"kind": "diamond", "m": 3}"#).unwrap();
        assert_eq!(d, DomainSpec::Diamond { m: 3 });
        let r: DomainSpec = serde_json::from_str(
            r#"{"kind": "radial2d", "constant": 1.0, "modes": [[16, 0.2, 0.0]]}"#,
        )
        .unwrap();
        let dom = r.to_domain(None).unwrap();
        assert_eq!(dom.dim(), 2);
        let mc: DomainSpec = serde_json::from_str(
            r#"{"kind": "monte_carlo", "of": {"kind": "cube", "m": 2}, "samples": 1000}"#,
        )
        .unwrap();
        assert!(mc.to_domain(None).is_err());
        assert!(mc.to_domain(Some(3)).is_ok());
    }

    #[test]
    fn rejects_unknown_kind_and_bad_params() {
        assert!(serde_json::from_str::<DomainSpec>(r#"{"kind": "torus"}"#).is_err());
        let bad = DomainSpec::ConeBall { m: 2, b: -1.0 };
        assert!(bad.to_domain(None).is_err());
    }
}
