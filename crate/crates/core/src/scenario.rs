//! JSON scenario files: one manifold, one cross-section, a list of radii.

use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::diffgeo::{DiffGeoError, Manifold, ManifoldSpec, Signature};
use crate::domains::DomainSpec;
use crate::quadrature::QuadratureSpec;
use crate::tube::{tube_report, McRequest, TubeError, TubeOptions, TubeReport};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario JSON: {0}")]
    Syntax(String),
    /// Validation failure attributed to one field of the scenario.
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl ScenarioError {
    fn field(field: &str, message: impl ToString) -> Self {
        ScenarioError::Field {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn field_name(&self) -> Option<&str> {
        match self {
            ScenarioError::Field { field, .. } => Some(field),
            ScenarioError::Syntax(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub samples: u64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub manifold: ManifoldSpec,
    pub domain: DomainSpec,
    pub signature: Signature,
    pub radii: Vec<f64>,
    pub quadrature: QuadratureSpec,
    pub mc: Option<McSpec>,
    /// Constant normal frame change, rows of an `m x m` matrix.
    pub frame_rotation: Option<Vec<Vec<f64>>>,
    pub output: Option<String>,
}

const FIELDS: [&str; 8] = [
    "manifold",
    "domain",
    "signature",
    "radii",
    "quadrature",
    "mc",
    "frame_rotation",
    "output",
];

fn take<T: DeserializeOwned>(
    obj: &mut Map<String, Value>,
    key: &str,
) -> Result<Option<T>, ScenarioError> {
    match obj.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v)
            .map(Some)
            .map_err(|e| ScenarioError::field(key, e)),
    }
}

fn required<T: DeserializeOwned>(
    obj: &mut Map<String, Value>,
    key: &str,
) -> Result<T, ScenarioError> {
    take(obj, key)?.ok_or_else(|| ScenarioError::field(key, "missing"))
}

impl Scenario {
    /// Parses and validates; every error names the offending field.
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ScenarioError::Syntax(e.to_string()))?;
        let Value::Object(mut obj) = value else {
            return Err(ScenarioError::Syntax("top level must be an object".into()));
        };
        if let Some(k) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(ScenarioError::field(k, "unknown field"));
        }
        let s = Scenario {
            manifold: required(&mut obj, "manifold")?,
            domain: required(&mut obj, "domain")?,
            signature: take(&mut obj, "signature")?.unwrap_or_default(),
            radii: required(&mut obj, "radii")?,
            quadrature: take(&mut obj, "quadrature")?.unwrap_or_default(),
            mc: take(&mut obj, "mc")?,
            frame_rotation: take(&mut obj, "frame_rotation")?,
            output: take(&mut obj, "output")?,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if self.radii.is_empty() {
            return Err(ScenarioError::field(
                "radii",
                "at least one radius is required",
            ));
        }
        if let Some(a) = self.radii.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(ScenarioError::field(
                "radii",
                format!("radius {a} must be positive"),
            ));
        }
        self.quadrature
            .validate()
            .map_err(|e| ScenarioError::field("quadrature", e))?;
        if let Some(mc) = &self.mc {
            if mc.samples == 0 {
                return Err(ScenarioError::field("mc.samples", "must be positive"));
            }
        }
        if let Some(rows) = &self.frame_rotation {
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                return Err(ScenarioError::field(
                    "frame_rotation",
                    "must be a square matrix",
                ));
            }
        }
        Ok(())
    }

    /// Runs both volume paths (and Monte Carlo when requested).
    /// `seed` overrides the seeds of the scenario's sampling components.
    pub fn run(&self, seed: Option<u64>) -> Result<TubeReport, ScenarioError> {
        let manifold = Manifold::new(self.manifold.clone(), self.signature).map_err(|e| {
            let field = if matches!(e, DiffGeoError::Invalid(ref s) if s.contains("lorentzian")) {
                "signature"
            } else {
                "manifold"
            };
            ScenarioError::field(field, e)
        })?;
        let domain = self
            .domain
            .to_domain(seed)
            .map_err(|e| ScenarioError::field("domain", e))?;
        let rotation = self.frame_rotation.as_ref().map(|rows| {
            let k = rows.len();
            DMatrix::from_fn(k, k, |i, j| rows[i][j])
        });
        let opts = TubeOptions {
            quadrature: self.quadrature,
            rotation,
            ..TubeOptions::default()
        };
        let mc = match &self.mc {
            None => None,
            Some(spec) => Some(McRequest {
                manifold: self.manifold.clone(),
                samples: spec.samples,
                seed: seed.or(spec.seed).ok_or_else(|| {
                    ScenarioError::field("mc.seed", "a seed is required for Monte Carlo")
                })?,
            }),
        };
        tube_report(&manifold, &domain, &self.radii, &opts, mc.as_ref()).map_err(|e| {
            let field = match &e {
                TubeError::BadRadius(_) | TubeError::NoRadii | TubeError::BeyondReach { .. } => {
                    "radii"
                }
                TubeError::DimensionMismatch { .. } | TubeError::Domain(_) => "domain",
                TubeError::Geometry(DiffGeoError::BadRotation { .. }) => "frame_rotation",
                TubeError::Geometry(DiffGeoError::Quadrature(_)) => "quadrature",
                TubeError::MonteCarlo(_) => "mc",
                _ => "manifold",
            };
            ScenarioError::field(field, e)
        })
    }
}

/// `radius,V_extrinsic,V_intrinsic,V_mc,stderr` rows; missing values are empty.
pub fn report_csv(report: &TubeReport) -> String {
    let mut out = String::from("radius,V_extrinsic,V_intrinsic,V_mc,stderr\n");
    for (k, a) in report.radii.iter().enumerate() {
        let int = report
            .intrinsic
            .as_ref()
            .map_or(String::new(), |i| i.path.volumes[k].to_string());
        let (mc, se) = report
            .monte_carlo
            .get(k)
            .map_or((String::new(), String::new()), |e| {
                (e.estimate.to_string(), e.std_err.to_string())
            });
        out.push_str(&format!(
            "{a},{},{int},{mc},{se}\n",
            report.extrinsic.volumes[k]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHELL: &str = r#"{
        "manifold": {"kind": "sphere", "radius": 2},
        "domain": {"kind": "cube", "m": 1},
        "radii": [0.05, 0.1],
        "mc": {"samples": 20000, "seed": 5}
    }"#;

    #[test]
    fn sphere_shell_scenario() {
        let s = Scenario::from_json(SHELL).unwrap();
        let r = s.run(None).unwrap();
        assert!(r.max_relative_discrepancy.unwrap() < 1e-9);
        assert_eq!(r.monte_carlo.len(), 2);
        let csv = report_csv(&r);
        assert_eq!(csv.lines().count(), 3);
        let again = serde_json::to_string(&s.run(None).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), again);
    }

    #[test]
    fn errors_name_fields() {
        let bad = SHELL.replace("[0.05, 0.1]", "\"wide\"");
        assert_eq!(
            Scenario::from_json(&bad).unwrap_err().field_name(),
            Some("radii")
        );
        let neg = SHELL.replace("[0.05, 0.1]", "[-1]");
        assert_eq!(
            Scenario::from_json(&neg).unwrap_err().field_name(),
            Some("radii")
        );
        let extra = SHELL.replace("\"radii\"", "\"colour\": 1, \"radii\"");
        assert_eq!(
            Scenario::from_json(&extra).unwrap_err().field_name(),
            Some("colour")
        );
        let wrong_dim = SHELL.replace("\"m\": 1", "\"m\": 2");
        let s = Scenario::from_json(&wrong_dim).unwrap();
        assert_eq!(s.run(None).unwrap_err().field_name(), Some("domain"));
        let no_seed = SHELL.replace(", \"seed\": 5", "");
        let s = Scenario::from_json(&no_seed).unwrap();
        assert_eq!(s.run(None).unwrap_err().field_name(), Some("mc.seed"));
        assert!(s.run(Some(1)).is_ok());
        let wide = SHELL.replace("[0.05, 0.1]", "[2.5]");
        let s = Scenario::from_json(&wide).unwrap();
        assert_eq!(s.run(None).unwrap_err().field_name(), Some("radii"));
    }
}
