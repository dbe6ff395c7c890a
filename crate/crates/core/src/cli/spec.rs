//! Input schema.
//!
//! A cone is given either by its coefficient matrices
//!
//! ```json
//! {"n": 2, "S": [[{"re": 0.5}, {}], [{}, {"re": 0.25}]], "H": [[{"re": 1}, {}], [{}, {"re": -1}]]}
//! ```
//!
//! (missing `re`/`im` fields and missing matrices are zero), or by a real
//! polynomial in `x_k = Re z_k`, `y_k = Im z_k`:
//!
//! ```json
//! {"n": 2, "poly": [{"vars": ["x1", "x1"], "coeff": 1.0}, {"vars": ["y1", "y1"], "coeff": 1.0}]}
//! ```

use std::fmt;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::linalg::{c, CMat, C64};
use crate::quadform::{decompose, QuadraticCone, RealVar, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecErrorKind {
    Schema,
    NonRealPolynomial,
    Degree,
}

/// Parse failure with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecError {
    pub kind: SpecErrorKind,
    pub path: String,
    pub message: String,
}

impl SpecError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind: SpecErrorKind::Schema,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} error at {}: {}", self.kind, self.path, self.message)
    }
}

impl std::error::Error for SpecError {}

/// How the input was given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecSource {
    Matrices,
    Poly,
}

/// A validated input cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    pub cone: QuadraticCone,
    pub source: SpecSource,
    /// Largest entry change made when symmetrizing `S` and hermitizing `H`.
    pub s_adjustment: f64,
    pub h_adjustment: f64,
}

pub fn parse_spec(text: &str) -> Result<ConeSpec, SpecError> {
    let value: Value = serde_json::from_str(text).map_err(|e| SpecError::schema("$", e.to_string()))?;
    parse_value(&value)
}

pub fn parse_value(value: &Value) -> Result<ConeSpec, SpecError> {
    let obj = value
        .as_object()
        .ok_or_else(|| SpecError::schema("$", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "n" | "S" | "H" | "poly" | "name" | "note") {
            return Err(SpecError::schema(format!("$.{key}"), "unknown field"));
        }
    }
    let n = match obj.get("n") {
        Some(v) => {
            let n = v
                .as_u64()
                .ok_or_else(|| SpecError::schema("$.n", "expected a positive integer"))?;
            if n < 2 {
                return Err(SpecError::schema("$.n", "n must be at least 2"));
            }
            Some(n as usize)
        }
        None => None,
    };
    let has_matrix = obj.contains_key("S") || obj.contains_key("H");
    match (obj.get("poly"), has_matrix) {
        (Some(_), true) => Err(SpecError::schema("$", "give either S/H or poly, not both")),
        (Some(poly), false) => parse_poly(poly, n),
        (None, _) => {
            let n = n.ok_or_else(|| SpecError::schema("$.n", "missing"))?;
            let s = parse_matrix(obj.get("S"), n, "$.S")?;
            let h = parse_matrix(obj.get("H"), n, "$.H")?;
            let (cone, ds, dh) = QuadraticCone::symmetrized(s, h).map_err(|e| SpecError::schema("$", e.to_string()))?;
            Ok(ConeSpec {
                cone,
                source: SpecSource::Matrices,
                s_adjustment: ds,
                h_adjustment: dh,
            })
        }
    }
}

fn parse_number(v: &Value, path: &str) -> Result<f64, SpecError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| SpecError::schema(path, "expected a finite number"))
}

fn parse_complex(v: &Value, path: &str) -> Result<C64, SpecError> {
    if v.is_number() {
        return Ok(c(parse_number(v, path)?, 0.0));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| SpecError::schema(path, "expected {re, im} or a number"))?;
    for key in obj.keys() {
        if key != "re" && key != "im" {
            return Err(SpecError::schema(format!("{path}.{key}"), "unknown field"));
        }
    }
    let part = |k: &str| match obj.get(k) {
        Some(x) => parse_number(x, &format!("{path}.{k}")),
        None => Ok(0.0),
    };
    Ok(c(part("re")?, part("im")?))
}

fn parse_matrix(v: Option<&Value>, n: usize, path: &str) -> Result<CMat, SpecError> {
    let Some(v) = v else {
        return Ok(CMat::zeros(n, n));
    };
    let rows = v
        .as_array()
        .ok_or_else(|| SpecError::schema(path, "expected an array of rows"))?;
    if rows.len() != n {
        return Err(SpecError::schema(path, format!("expected {n} rows, got {}", rows.len())));
    }
    let mut m = CMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| SpecError::schema(&rp, "expected an array"))?;
        if row.len() != n {
            return Err(SpecError::schema(&rp, format!("expected {n} entries, got {}", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = parse_complex(x, &format!("{rp}[{j}]"))?;
        }
    }
    Ok(m)
}

fn parse_poly(v: &Value, n: Option<usize>) -> Result<ConeSpec, SpecError> {
    let items = v
        .as_array()
        .ok_or_else(|| SpecError::schema("$.poly", "expected an array of terms"))?;
    let mut terms = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        let tp = format!("$.poly[{k}]");
        let obj = item
            .as_object()
            .ok_or_else(|| SpecError::schema(&tp, "expected {vars, coeff}"))?;
        for key in obj.keys() {
            if key != "vars" && key != "coeff" {
                return Err(SpecError::schema(format!("{tp}.{key}"), "unknown field"));
            }
        }
        let vars = obj
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| SpecError::schema(format!("{tp}.vars"), "expected an array of variable names"))?;
        let mut parsed = Vec::with_capacity(vars.len());
        for (j, name) in vars.iter().enumerate() {
            let vp = format!("{tp}.vars[{j}]");
            let s = name.as_str().ok_or_else(|| SpecError::schema(&vp, "expected a string"))?;
            parsed.push(s.parse::<RealVar>().map_err(|e| SpecError::schema(&vp, e.to_string()))?);
        }
        let coeff = parse_complex(
            obj.get("coeff").ok_or_else(|| SpecError::schema(format!("{tp}.coeff"), "missing"))?,
            &format!("{tp}.coeff"),
        )?;
        terms.push(Term { vars: parsed, coeff });
    }
    let cone = decompose(&terms, n).map_err(|e| match e {
        Error::NonReal { index, .. } => SpecError {
            kind: SpecErrorKind::NonRealPolynomial,
            path: format!("$.poly[{index}].coeff"),
            message: e.to_string(),
        },
        Error::NonHomogeneous { index, .. } => SpecError {
            kind: SpecErrorKind::Degree,
            path: format!("$.poly[{index}].vars"),
            message: e.to_string(),
        },
        other => SpecError::schema("$.poly", other.to_string()),
    })?;
    Ok(ConeSpec {
        cone,
        source: SpecSource::Poly,
        s_adjustment: 0.0,
        h_adjustment: 0.0,
    })
}

pub fn complex_json(z: C64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn matrix_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

/// Matrix form of a cone, accepted back by [`parse_spec`].
pub fn render(cone: &QuadraticCone) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(cone.n()));
    obj.insert("S".into(), matrix_json(cone.s()));
    obj.insert("H".into(), matrix_json(cone.h()));
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decider::example_cone;
    use crate::linalg;

    #[test]
    fn example_m_spec() {
        let text = r#"{"n":2,"S":[[{"re":0.5},{"re":0}],[{"re":0},{"re":0.3333333333}]],"H":[[{"re":1},{}],[{},{"re":-1}]]}"#;
        let spec = parse_spec(text).unwrap();
        let m = example_cone();
        assert!(linalg::max_abs(&(spec.cone.s() - m.s())) < 1e-10);
        assert!(linalg::max_abs(&(spec.cone.h() - m.h())) < 1e-15);
    }

    #[test]
    fn empty_entries_are_zero() {
        let spec = parse_spec(r#"{"n":2,"S":[[{},{}],[{},{}]],"H":[[{},{}],[{},{}]]}"#).unwrap();
        assert!(spec.cone.is_zero());
    }

    #[test]
    fn poly_hermitian() {
        let spec = parse_spec(r#"{"n":3,"poly":[{"vars":["x1","x1"],"coeff":1},{"vars":["y1","y1"],"coeff":1}]}"#).unwrap();
        let mut h = CMat::zeros(3, 3);
        h[(0, 0)] = c(1.0, 0.0);
        assert!(linalg::max_abs(&(spec.cone.h() - h)) < 1e-15);
        assert!(linalg::max_abs(spec.cone.s()) < 1e-15);
    }

    #[test]
    fn errors_carry_paths() {
        let e = parse_spec(r#"{"n":2,"S":[[{"re":"a"},{}],[{},{}]]}"#).unwrap_err();
        assert_eq!(e.path, "$.S[0][0].re");
        let e = parse_spec(r#"{"n":2,"poly":[{"vars":["x1"],"coeff":1}]}"#).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::Degree);
        let e = parse_spec(r#"{"n":2,"poly":[{"vars":["x1","x2"],"coeff":{"re":1,"im":2}}]}"#).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::NonRealPolynomial);
        let e = parse_spec(r#"{"n":2,"S":[[{}]]}"#).unwrap_err();
        assert_eq!(e.path, "$.S");
    }

    #[test]
    fn asymmetric_input_is_symmetrized() {
        let spec = parse_spec(r#"{"n":2,"S":[[{},{"re":1}],[{},{}]]}"#).unwrap();
        assert!((spec.cone.s()[(0, 1)].re - 0.5).abs() < 1e-15);
        assert!(spec.s_adjustment > 0.0);
    }

    #[test]
    fn render_round_trip() {
        let cone = example_cone();
        let text = render(&cone).to_string();
        let back = parse_spec(&text).unwrap();
        assert_eq!(back.cone, cone);
        assert_eq!(render(&back.cone).to_string(), text);
    }
}
