use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{MultiIndex, Poly, PolyError, Rat};

/// Wire form of an exact polynomial:
/// `{"m": 2, "terms": [{"alpha": [1, 0], "num": "-3", "den": "2"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub m: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub num: String,
    pub den: String,
}

impl From<&Poly<Rat>> for PolyJson {
    fn from(p: &Poly<Rat>) -> Self {
        PolyJson {
            m: p.nvars(),
            terms: p
                .terms()
                .map(|(a, c)| TermJson {
                    alpha: a.exponents().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for Poly<Rat> {
    type Error = PolyError;

    fn try_from(j: &PolyJson) -> Result<Self, PolyError> {
        let mut p = Poly::zero(j.m);
        for (k, t) in j.terms.iter().enumerate() {
            if t.alpha.len() != j.m {
                return Err(PolyError::Json(format!(
                    "terms[{k}].alpha has length {}, expected {}",
                    t.alpha.len(),
                    j.m
                )));
            }
            let num = BigInt::from_str(&t.num)
                .map_err(|e| PolyError::Json(format!("terms[{k}].num: {e}")))?;
            let den = BigInt::from_str(&t.den)
                .map_err(|e| PolyError::Json(format!("terms[{k}].den: {e}")))?;
            if den == BigInt::from(0) {
                return Err(PolyError::Json(format!("terms[{k}].den is zero")));
            }
            p.add_term(MultiIndex::new(t.alpha.clone()), Rat::new(num, den));
        }
        Ok(p)
    }
}

impl Poly<Rat> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("polynomial serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        Poly::try_from(&j)
    }
}
