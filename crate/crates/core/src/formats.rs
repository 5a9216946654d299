//! JSON input files: cubic forms, algebras and torsion tensors.
//!
//! Errors name the offending field (`monomials[2].coeff`, `basis[0]`, ...).

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::exactla::rational::{int, parse_rational};
use crate::exactla::{Matrix, Rational, Vector};
use crate::legendrian::{CubicError, CubicForm, Monomial};
use crate::prolong::TorsionTensor;
use crate::symplectic::{LieSubalgebra, SymplecticError, SymplecticSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Field {
        field: field.into(),
        message: message.into(),
    }
}

fn rational_at(v: &Value, field: &str) -> Result<Rational, InputError> {
    match v {
        Value::String(s) => {
            parse_rational(s).map_err(|_| field_err(field, format!("malformed rational {s:?}")))
        }
        Value::Number(n) => n.as_i64().map(int).ok_or_else(|| {
            field_err(
                field,
                format!("expected an integer or \"p/q\" string, found {n}"),
            )
        }),
        other => Err(field_err(
            field,
            format!("expected a rational string, found {other}"),
        )),
    }
}

fn rational_vec_at(values: &[Value], field: &str) -> Result<Vector, InputError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| rational_at(v, &format!("{field}[{i}]")))
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCubic {
    n: i64,
    monomials: Vec<RawMonomial>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMonomial {
    ijk: Vec<i64>,
    coeff: Value,
}

pub fn parse_cubic(text: &str) -> Result<CubicForm, InputError> {
    let raw: RawCubic = serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    if raw.n < 1 {
        return Err(field_err("n", "must be at least 1"));
    }
    let n = raw.n as usize;
    let mut monomials = Vec::with_capacity(raw.monomials.len());
    for (k, m) in raw.monomials.iter().enumerate() {
        let field = format!("monomials[{k}].ijk");
        if m.ijk.len() != 3 {
            return Err(field_err(field, "expected exactly three indices"));
        }
        if m.ijk.iter().any(|&i| i < 0 || i >= raw.n) {
            return Err(field_err(field, format!("indices must lie in 0..{n}")));
        }
        let ijk = [m.ijk[0] as usize, m.ijk[1] as usize, m.ijk[2] as usize];
        let coeff = rational_at(&m.coeff, &format!("monomials[{k}].coeff"))?;
        monomials.push(Monomial { ijk, coeff });
    }
    CubicForm::from_monomials(n, &monomials).map_err(|e| match e {
        CubicError::IndexOrder { index, .. } => field_err(
            format!("monomials[{index}].ijk"),
            "indices must satisfy i <= j <= k",
        ),
        other => field_err("monomials", other.to_string()),
    })
}

/// Cubic form as the JSON input format.
pub fn cubic_to_json(p: &CubicForm) -> Value {
    serde_json::json!({ "n": p.n(), "monomials": p.monomials() })
}

#[derive(Deserialize)]
struct RawAlgebra {
    #[serde(rename = "dim_V")]
    dim_v: i64,
    basis: Vec<Vec<Vec<Value>>>,
    closed: Option<bool>,
}

/// An algebra file together with the closure flag it claims.
#[derive(Clone, Debug)]
pub struct LoadedAlgebra {
    pub algebra: LieSubalgebra,
    pub claimed_closed: Option<bool>,
}

pub fn parse_algebra(text: &str) -> Result<LoadedAlgebra, InputError> {
    let raw: RawAlgebra =
        serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    if raw.dim_v < 2 || raw.dim_v % 2 != 0 {
        return Err(field_err("dim_V", "must be a positive even integer"));
    }
    let n = raw.dim_v as usize;
    let space = SymplecticSpace::standard(n / 2).expect("n >= 2");
    let mut basis = Vec::with_capacity(raw.basis.len());
    for (k, rows) in raw.basis.iter().enumerate() {
        let field = format!("basis[{k}]");
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(field_err(field, format!("expected a {n}x{n} matrix")));
        }
        let rows: Vec<Vector> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| rational_vec_at(r, &format!("{field}[{i}]")))
            .collect::<Result<_, _>>()?;
        basis.push(Matrix::from_rows(rows).expect("shape checked"));
    }
    let algebra = LieSubalgebra::new(space, basis).map_err(|e| match e {
        SymplecticError::DependentBasis(i) => field_err(
            format!("basis[{i}]"),
            "linearly dependent on the previous matrices",
        ),
        other => field_err("basis", other.to_string()),
    })?;
    Ok(LoadedAlgebra {
        algebra,
        claimed_closed: raw.closed,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTorsion {
    pairs: Vec<RawPair>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    ij: Vec<i64>,
    value: Vec<Value>,
}

/// Missing pairs are zero; a repeated pair is an error.
pub fn parse_torsion(text: &str, dim_v: usize) -> Result<TorsionTensor, InputError> {
    let raw: RawTorsion =
        serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
    let mut pi = TorsionTensor::zero(dim_v);
    let mut seen = Vec::new();
    for (k, pair) in raw.pairs.iter().enumerate() {
        let field = format!("pairs[{k}].ij");
        let &[i, j] = pair.ij.as_slice() else {
            return Err(field_err(field, "expected two indices"));
        };
        if !(0 <= i && i < j && (j as usize) < dim_v) {
            return Err(field_err(field, format!("require 0 <= i < j < {dim_v}")));
        }
        if seen.contains(&(i, j)) {
            return Err(field_err(field, "pair listed twice"));
        }
        seen.push((i, j));
        let vfield = format!("pairs[{k}].value");
        if pair.value.len() != dim_v {
            return Err(field_err(vfield, format!("expected {dim_v} entries")));
        }
        pi.set(
            i as usize,
            j as usize,
            rational_vec_at(&pair.value, &vfield)?,
        );
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::frac;

    #[test]
    fn cubic_round_trip() {
        let text = r#"{"n": 2, "monomials": [{"ijk": [0,0,0], "coeff": "1"}, {"ijk": [0,1,1], "coeff": "-3/2"}]}"#;
        let p = parse_cubic(text).unwrap();
        assert_eq!(p.entry(1, 0, 1), &frac(-1, 2));
        let again = parse_cubic(&cubic_to_json(&p).to_string()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn cubic_errors_name_fields() {
        let bad_order = r#"{"n": 2, "monomials": [{"ijk": [1,0,0], "coeff": "1"}]}"#;
        assert_eq!(
            parse_cubic(bad_order).unwrap_err().to_string(),
            "monomials[0].ijk: indices must satisfy i <= j <= k"
        );
        let bad_coeff = r#"{"n": 1, "monomials": [{"ijk": [0,0,0], "coeff": "1/x"}]}"#;
        assert!(parse_cubic(bad_coeff)
            .unwrap_err()
            .to_string()
            .starts_with("monomials[0].coeff"));
        let bad_range = r#"{"n": 1, "monomials": [{"ijk": [0,0,1], "coeff": 1}]}"#;
        assert!(parse_cubic(bad_range)
            .unwrap_err()
            .to_string()
            .starts_with("monomials[0].ijk"));
        assert!(matches!(parse_cubic("{"), Err(InputError::Json(_))));
    }

    #[test]
    fn algebra_shape_errors() {
        let text = r#"{"dim_V": 2, "basis": [[["1","0"],["0","1"]], [["1"]]], "closed": true}"#;
        assert_eq!(
            parse_algebra(text).unwrap_err().to_string(),
            "basis[1]: expected a 2x2 matrix"
        );
        let odd = r#"{"dim_V": 3, "basis": [], "closed": true}"#;
        assert!(parse_algebra(odd)
            .unwrap_err()
            .to_string()
            .starts_with("dim_V"));
    }

    #[test]
    fn torsion_parsing() {
        let text = r#"{"pairs": [{"ij": [0,1], "value": ["1","2/3"]}]}"#;
        let pi = parse_torsion(text, 2).unwrap();
        assert_eq!(pi.get(0, 1), vec![int(1), frac(2, 3)]);
        let reversed = r#"{"pairs": [{"ij": [1,0], "value": ["1","0"]}]}"#;
        assert!(parse_torsion(reversed, 2)
            .unwrap_err()
            .to_string()
            .starts_with("pairs[0].ij"));
        let short = r#"{"pairs": [{"ij": [0,1], "value": ["1"]}]}"#;
        assert!(parse_torsion(short, 2)
            .unwrap_err()
            .to_string()
            .starts_with("pairs[0].value"));
    }
}
