//! Instance files: an explicit frame algebra with metric and P, or a named
//! builtin family member.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rpm_geometry::example::{build_example, ExampleParams};
use rpm_geometry::{GeometryError, LieFrameAlgebra, MetricTensor, ProductStructure, RpmInstance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const BUILTIN_NAME: &str = "w1-example";

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("malformed instance file: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid instance: {0}")]
    Invalid(String),

    /// Well-formed input whose metric cannot be inverted.
    #[error("metric rejected: {0}")]
    Metric(GeometryError),
}

/// A rational given as a JSON number or a string such as `"3/4"` or `"-2"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRational", into = "RawRational")]
pub struct Rational(pub f64);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Number(f64),
    Text(String),
}

impl TryFrom<RawRational> for Rational {
    type Error = String;

    fn try_from(raw: RawRational) -> Result<Self, String> {
        match raw {
            RawRational::Number(v) => Ok(Rational(v)),
            RawRational::Text(s) => s.parse(),
        }
    }
}

impl From<Rational> for RawRational {
    fn from(r: Rational) -> Self {
        RawRational::Number(r.0)
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if let Ok(r) = t.parse::<Ratio<i64>>() {
            return Ok(Rational(*r.numer() as f64 / *r.denom() as f64));
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Rational(v)),
            _ => Err(format!("not a rational number: {s:?}")),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Comma-separated rationals, e.g. `1,2,-1/2,0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalList(pub Vec<f64>);

pub fn parse_list(s: &str) -> Result<RationalList, String> {
    s.split(',')
        .map(|p| p.parse::<Rational>().map(|r| r.0))
        .collect::<Result<_, _>>()
        .map(RationalList)
}

/// `[X_i, X_j] = Σ_k coeffs[k] X_k`, with 1-based `i`, `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Builtin {
    pub name: String,
    pub lambda: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<Vec<BracketEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<Rational>>>,
    #[serde(default, rename = "P", alias = "p", skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Vec<Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
}

/// A loaded instance with a short description for reports.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub instance: RpmInstance,
    pub description: serde_json::Value,
    /// λ when the instance is the builtin family member.
    pub lambda: Option<[f64; 4]>,
}

pub fn builtin(lambda: [f64; 4]) -> Loaded {
    Loaded {
        instance: build_example(&ExampleParams::new(lambda)),
        description: serde_json::json!({ "builtin": BUILTIN_NAME, "lambda": lambda }),
        lambda: Some(lambda),
    }
}

pub fn lambda_from(values: &[f64]) -> Result<[f64; 4], InstanceError> {
    values
        .try_into()
        .map_err(|_| InstanceError::Invalid(format!("lambda needs 4 entries, got {}", values.len())))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn load(&self) -> Result<Loaded, InstanceError> {
        let explicit = self.dim.is_some() || self.brackets.is_some() || self.metric.is_some() || self.p.is_some();
        match (&self.builtin, explicit) {
            (Some(_), true) => Err(InstanceError::Invalid(
                "give either the explicit fields or builtin, not both".into(),
            )),
            (None, false) => Err(InstanceError::Invalid(
                "missing instance: give dim, brackets, metric, P or builtin".into(),
            )),
            (Some(b), false) => {
                if b.name != BUILTIN_NAME {
                    return Err(InstanceError::Invalid(format!(
                        "unknown builtin {:?} (known: {BUILTIN_NAME})",
                        b.name
                    )));
                }
                let lam: Vec<f64> = b.lambda.iter().map(|r| r.0).collect();
                Ok(builtin(lambda_from(&lam)?))
            }
            (None, true) => self.load_explicit(),
        }
    }

    fn load_explicit(&self) -> Result<Loaded, InstanceError> {
        let missing = |f: &str| InstanceError::Invalid(format!("explicit instance is missing {f}"));
        let dim = self.dim.ok_or_else(|| missing("dim"))?;
        if dim < 4 || !dim.is_multiple_of(2) {
            return Err(InstanceError::Invalid(format!(
                "dim must be even and at least 4, got {dim}"
            )));
        }
        let metric = square(self.metric.as_ref().ok_or_else(|| missing("metric"))?, dim, "metric")?;
        let p = square(self.p.as_ref().ok_or_else(|| missing("P"))?, dim, "P")?;

        let mut brackets = Vec::new();
        for b in self.brackets.as_deref().unwrap_or_default() {
            if !(1..=dim).contains(&b.i) || !(1..=dim).contains(&b.j) {
                return Err(InstanceError::Invalid(format!(
                    "bracket index ({}, {}) outside 1..{dim}",
                    b.i, b.j
                )));
            }
            if b.coeffs.len() != dim {
                return Err(InstanceError::Invalid(format!(
                    "bracket ({}, {}) has {} coefficients, expected {dim}",
                    b.i,
                    b.j,
                    b.coeffs.len()
                )));
            }
            brackets.push((b.i - 1, b.j - 1, b.coeffs.iter().map(|r| r.0).collect()));
        }
        let alg = LieFrameAlgebra::from_brackets(dim, &brackets).map_err(|e| InstanceError::Invalid(e.to_string()))?;
        let p = ProductStructure::from_rows(&p).map_err(|e| InstanceError::Invalid(e.to_string()))?;
        let metric = MetricTensor::from_rows(&metric).map_err(InstanceError::Metric)?;
        let instance = RpmInstance::new(alg, metric, p).map_err(|e| InstanceError::Invalid(e.to_string()))?;
        Ok(Loaded {
            instance,
            description: serde_json::json!({ "explicit": true, "dim": dim }),
            lambda: None,
        })
    }
}

fn square(rows: &[Vec<Rational>], dim: usize, what: &str) -> Result<Vec<Vec<f64>>, InstanceError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(InstanceError::Invalid(format!("{what} must be a {dim}x{dim} matrix")));
    }
    Ok(rows.iter().map(|r| r.iter().map(|v| v.0).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_from_strings_and_numbers() {
        assert_eq!("3/4".parse::<Rational>().unwrap().0, 0.75);
        assert_eq!("-2".parse::<Rational>().unwrap().0, -2.0);
        assert_eq!("0.5".parse::<Rational>().unwrap().0, 0.5);
        assert!("x".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        let v: Vec<Rational> = serde_json::from_str(r#"[1, "1/2", -0.25]"#).unwrap();
        assert_eq!(v.iter().map(|r| r.0).collect::<Vec<_>>(), vec![1.0, 0.5, -0.25]);
    }

    #[test]
    fn lists_parse() {
        assert_eq!(parse_list("1,-1/2, 3,0").unwrap().0, vec![1.0, -0.5, 3.0, 0.0]);
        assert!(parse_list("1,,2").is_err());
    }

    #[test]
    fn builtin_and_explicit_are_exclusive() {
        let both = r#"{"dim":4,"builtin":{"name":"w1-example","lambda":[1,0,0,0]}}"#;
        assert!(matches!(
            InstanceFile::from_json(both).unwrap().load(),
            Err(InstanceError::Invalid(_))
        ));
        assert!(matches!(
            InstanceFile::from_json("{}").unwrap().load(),
            Err(InstanceError::Invalid(_))
        ));
    }

    #[test]
    fn unknown_builtin_and_bad_lambda_are_rejected() {
        let f = InstanceFile::from_json(r#"{"builtin":{"name":"sphere","lambda":[1,0,0,0]}}"#).unwrap();
        assert!(f.load().is_err());
        let f = InstanceFile::from_json(r#"{"builtin":{"name":"w1-example","lambda":[1,0,0]}}"#).unwrap();
        assert!(f.load().is_err());
    }

    #[test]
    fn explicit_indices_are_one_based() {
        let text = r#"{
            "dim": 4,
            "brackets": [{"i": 1, "j": 2, "coeffs": [0, 1, 0, 0]}],
            "metric": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
            "P": [[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]]
        }"#;
        let loaded = InstanceFile::from_json(text).unwrap().load().unwrap();
        use rpm_geometry::FramePoint;
        assert_eq!(loaded.instance.algebra().constant(1, 0, 1), 1.0);
        assert_eq!(loaded.instance.algebra().constant(1, 1, 0), -1.0);

        let bad = text.replace("\"i\": 1", "\"i\": 0");
        assert!(InstanceFile::from_json(&bad).unwrap().load().is_err());
        let odd = text.replace("\"dim\": 4", "\"dim\": 3");
        assert!(InstanceFile::from_json(&odd).unwrap().load().is_err());
    }

    #[test]
    fn indefinite_metric_is_a_metric_error() {
        let text = r#"{"dim":4,"brackets":[],
            "metric":[[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,1]],
            "P":[[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]]}"#;
        assert!(matches!(
            InstanceFile::from_json(text).unwrap().load(),
            Err(InstanceError::Metric(_))
        ));
    }
}
