//   Copyright 2026 toric-mmp developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.


//! JSON documents for fans, pairs and reports.
//!
//! Integers are arbitrary precision; rationals are strings `"p/q"` (or a
//! bare integer on input). Decimal notation is rejected everywhere.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Number, Value};
use thiserror::Error;

use crate::corpus;
use crate::divisor::{DivisorError, HypersurfaceClass, ToricDivisor};
use crate::fan::{Fan, FanError};
use crate::lattice::{Integer, MRational, NPoint, Rational};
use crate::polytope::Polytope;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{context}: {source}")]
    Json { context: String, source: serde_json::Error },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("fan: {0}")]
    Fan(#[from] FanError),
    #[error("class: {0}")]
    Divisor(#[from] DivisorError),
    #[error("unknown built-in example '{0}'")]
    UnknownExample(String),
}

fn field(field: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Field { field: field.into(), message: message.into() }
}

/// Format a rational as `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `"p/q"` or `"p"`; decimals and zero denominators are errors.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(format!("'{s}' is not an exact rational (decimals are not accepted)"));
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = Integer::from_str(n).map_err(|_| format!("'{s}' is not a rational of the form p/q"))?;
    let d = Integer::from_str(d).map_err(|_| format!("'{s}' is not a rational of the form p/q"))?;
    if d == Integer::from(0) {
        return Err(format!("'{s}' has zero denominator"));
    }
    Ok(Rational::new(n, d))
}

fn parse_integer(v: &Number, at: &str) -> Result<Integer, DocumentError> {
    let s = v.to_string();
    Integer::from_str(&s).map_err(|_| field(at, format!("'{s}' is not an integer")))
}

fn integer_number(x: &Integer) -> Number {
    Number::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub dimension: usize,
    pub rays: Vec<Vec<Number>>,
    pub maximal_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl FanDocument {
    pub fn from_fan(fan: &Fan, name: Option<String>) -> FanDocument {
        FanDocument {
            dimension: fan.dim(),
            rays: fan.rays().iter().map(|r| r.coords().iter().map(integer_number).collect()).collect(),
            maximal_cones: fan.cones().to_vec(),
            name,
        }
    }

    pub fn to_fan(&self) -> Result<Fan, DocumentError> {
        let mut rays = Vec::with_capacity(self.rays.len());
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.dimension {
                return Err(field(format!("rays[{i}]"), format!("expected {} coordinates", self.dimension)));
            }
            let coords = r
                .iter()
                .enumerate()
                .map(|(j, x)| parse_integer(x, &format!("rays[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            rays.push(NPoint::new(coords));
        }
        for (i, c) in self.maximal_cones.iter().enumerate() {
            if let Some(&bad) = c.iter().find(|&&k| k >= rays.len()) {
                return Err(field(format!("maximal_cones[{i}]"), format!("ray index {bad} out of range")));
            }
        }
        Ok(Fan::new(self.dimension, &rays, &self.maximal_cones)?)
    }
}

/// A fan inline, or `"@name"` for a built-in example's fan, or a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanRef {
    Inline(FanDocument),
    Reference(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub fan: FanRef,
    /// Ray index (of the referenced document) to coefficient.
    pub class_coefficients: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl PairDocument {
    pub fn from_class(class: &HypersurfaceClass, name: Option<String>) -> PairDocument {
        let coeffs = class
            .divisor()
            .coefficients()
            .iter()
            .enumerate()
            .map(|(i, c)| (i.to_string(), format_rational(c)))
            .collect();
        PairDocument {
            fan: FanRef::Inline(FanDocument::from_fan(class.fan(), name.clone())),
            class_coefficients: coeffs,
            name,
        }
    }

    /// Resolve the fan and build the class. Coefficients are given against the
    /// document's ray order; missing indices are zero.
    pub fn to_class(&self, base: Option<&Path>) -> Result<HypersurfaceClass, DocumentError> {
        let (doc_rays, fan) = match &self.fan {
            FanRef::Inline(d) => {
                let fan = d.to_fan()?;
                let rays = d
                    .rays
                    .iter()
                    .map(|r| r.iter().map(|x| parse_integer(x, "rays")).collect::<Result<Vec<_>, _>>().map(NPoint::new))
                    .collect::<Result<Vec<_>, _>>()?;
                (rays, fan)
            }
            FanRef::Reference(r) => {
                let fan = if let Some(name) = r.strip_prefix('@') {
                    corpus::example(name).ok_or_else(|| DocumentError::UnknownExample(name.into()))?.fan().clone()
                } else {
                    let path = base.map_or_else(|| PathBuf::from(r), |b| b.join(r));
                    load_fan(&path)?
                };
                (fan.rays().to_vec(), fan)
            }
        };
        let mut coefficients = vec![Rational::from_integer(0.into()); fan.rays().len()];
        for (key, value) in &self.class_coefficients {
            let at = format!("class_coefficients[\"{key}\"]");
            let i: usize = key.parse().map_err(|_| field(&at, "key is not a ray index"))?;
            let ray = doc_rays.get(i).ok_or_else(|| field(&at, "ray index out of range"))?;
            let prim = crate::lattice::primitivize(ray).map_err(|e| field(&at, e.to_string()))?;
            let j = fan.ray_index(&prim).ok_or_else(|| field(&at, "ray is not used by any maximal cone"))?;
            coefficients[j] = parse_rational(value).map_err(|m| field(&at, m))?;
        }
        Ok(HypersurfaceClass::from_divisor(&ToricDivisor::new(fan, coefficients)?)?)
    }
}

fn read(path: &Path) -> Result<String, DocumentError> {
    std::fs::read_to_string(path).map_err(|source| DocumentError::Io { path: path.display().to_string(), source })
}

pub fn parse_fan(text: &str, context: &str) -> Result<Fan, DocumentError> {
    let doc: FanDocument =
        serde_json::from_str(text).map_err(|source| DocumentError::Json { context: context.into(), source })?;
    doc.to_fan()
}

pub fn load_fan(path: &Path) -> Result<Fan, DocumentError> {
    parse_fan(&read(path)?, &path.display().to_string())
}

pub fn parse_pair(text: &str, context: &str, base: Option<&Path>) -> Result<HypersurfaceClass, DocumentError> {
    let doc: PairDocument =
        serde_json::from_str(text).map_err(|source| DocumentError::Json { context: context.into(), source })?;
    doc.to_class(base)
}

/// Load a pair from a file, or `@name` for a built-in example.
pub fn load_pair(spec: &str) -> Result<HypersurfaceClass, DocumentError> {
    if let Some(name) = spec.strip_prefix('@') {
        return Ok(corpus::example(name).ok_or_else(|| DocumentError::UnknownExample(name.into()))?.class);
    }
    let path = Path::new(spec);
    parse_pair(&read(path)?, spec, path.parent())
}

pub fn rational_value(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn point_value(m: &MRational) -> Value {
    Value::Array(m.coords().iter().map(rational_value).collect())
}

pub fn integer_vector(v: &[Integer]) -> Value {
    Value::Array(v.iter().map(|x| Value::Number(integer_number(x))).collect())
}

pub fn polytope_value(p: &Polytope) -> Value {
    json!({
        "dimension": p.dim(),
        "vertices": p.vertices().iter().map(point_value).collect::<Vec<_>>(),
    })
}

pub fn fan_value(fan: &Fan) -> Value {
    serde_json::to_value(FanDocument::from_fan(fan, None)).expect("documents serialize")
}

/// Canonical serialization: the fan with sorted rays and cones.
pub fn save_fan(fan: &Fan, name: Option<String>) -> String {
    serde_json::to_string_pretty(&FanDocument::from_fan(fan, name)).expect("documents serialize")
}

pub fn save_pair(class: &HypersurfaceClass, name: Option<String>) -> String {
    serde_json::to_string_pretty(&PairDocument::from_class(class, name)).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::coordinate_fan;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-4").unwrap(), Rational::from_integer((-4).into()));
        assert!(parse_rational("0.5").unwrap_err().contains("decimals"));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&Rational::from_integer(2.into())), "2/1");
    }

    #[test]
    fn fan_round_trip() {
        let f = coordinate_fan(3);
        let text = save_fan(&f, Some("octants".into()));
        let g = parse_fan(&text, "test").unwrap();
        assert_eq!(f, g);
        assert_eq!(save_fan(&g, Some("octants".into())), text);
    }

    #[test]
    fn example_document_loads() {
        let e = corpus::example("kappa-zero").unwrap();
        let text = save_pair(&e.class, Some(e.name.into()));
        let c = parse_pair(&text, "test", None).unwrap();
        assert_eq!(c.fan().rays().len(), 14);
        assert_eq!(c.fan().cones().len(), 24);
        assert_eq!(c.values(), e.class.values());
        assert_eq!(save_pair(&c, Some(e.name.into())), text);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let bad = r#"{"fan": "@kappa-zero", "class_coefficients": {"0": "0.5"}}"#;
        let e = parse_pair(bad, "t", None).unwrap_err().to_string();
        assert!(e.contains("class_coefficients[\"0\"]") && e.contains("decimals"), "{e}");
        let bad = r#"{"dimension": 2, "rays": [[1, 0], [0, 1]], "maximal_cones": [[0, 5]]}"#;
        let e = parse_fan(bad, "t").unwrap_err().to_string();
        assert!(e.contains("maximal_cones[0]"), "{e}");
        let bad = r#"{"dimension": 2, "rays": [[1.5, 0]], "maximal_cones": [[0]]}"#;
        assert!(parse_fan(bad, "t").unwrap_err().to_string().contains("rays[0][0]"));
        let bad = r#"{"dimension": 2, "rays": [[1, 0]], "maximal_cones": [[0]], "extra": 1}"#;
        assert!(matches!(parse_fan(bad, "t"), Err(DocumentError::Json { .. })));
    }

    #[test]
    fn big_integers_survive() {
        let text = r#"{"dimension": 1, "rays": [[123456789012345678901234567890]], "maximal_cones": [[0]]}"#;
        let f = parse_fan(text, "t").unwrap();
        assert_eq!(f.rays()[0], NPoint::from_i64(&[1]));
        let text = r#"{"dimension": 2, "rays": [[123456789012345678901234567891, 2]], "maximal_cones": [[0]]}"#;
        let f = parse_fan(text, "t").unwrap();
        assert_eq!(f.rays()[0][0].to_string(), "123456789012345678901234567891");
    }
}
