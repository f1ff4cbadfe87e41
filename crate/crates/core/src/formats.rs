//! JSON formats for loop-algebra elements and realization descriptors.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::laurent::MatrixLaurent;
use crate::lie::{
    from_generators, standard_generators, Family, GeneratorSet, Normalization, QMatrix, Realization,
};
use crate::linalg::Matrix;
use crate::poly::{Poly, Time};
use crate::rational::{format_rational, parse_rational, Rational};

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentTerm {
    pub lambda: i64,
    pub matrix: Vec<Vec<String>>,
}

/// Accepts one `{lambda, matrix}` object or a list of them.
pub fn parse_laurent(text: &str) -> Result<MatrixLaurent<Poly>> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let terms: Vec<LaurentTerm> = match v {
        Value::Array(_) => serde_json::from_value(v),
        _ => serde_json::from_value(v).map(|t| vec![t]),
    }
    .map_err(|e| Error::Invalid(format!("matrix element: {e}")))?;
    if terms.is_empty() {
        return Err(Error::Invalid("matrix element has no terms".into()));
    }
    let m = terms[0].matrix.len();
    let mut out = MatrixLaurent::zero(m);
    for (k, t) in terms.iter().enumerate() {
        if t.matrix.len() != m || t.matrix.iter().any(|r| r.len() != m) {
            return Err(Error::Invalid(format!(
                "term {k} (lambda^{}) is not a {m}x{m} matrix",
                t.lambda
            )));
        }
        let mut a = Matrix::zeros(m, m);
        for (i, row) in t.matrix.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                a[(i, j)] = Poly::parse(s).map_err(|e| {
                    Error::Invalid(format!("term {k}, entry ({i},{j}) `{s}`: {e}"))
                })?;
            }
        }
        out = out.add(&MatrixLaurent::monomial(t.lambda, a));
    }
    Ok(out)
}

pub fn laurent_to_json(x: &MatrixLaurent<Poly>) -> Value {
    let terms: Vec<LaurentTerm> = x
        .blocks()
        .map(|(k, a)| LaurentTerm {
            lambda: k,
            matrix: a
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|p| p.to_string()).collect())
                .collect(),
        })
        .collect();
    serde_json::to_value(terms).expect("serializable")
}

/// Fractions such as `2/4` that are not in lowest terms.
pub fn unreduced_fractions(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() && (i == 0 || !bytes[i - 1].is_ascii_alphanumeric()) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < bytes.len() && bytes[i] == '/' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = bytes[start..i].iter().collect();
                if let Some((p, q)) = frac.split_once('/') {
                    let (p, q): (num_bigint::BigInt, num_bigint::BigInt) =
                        (p.parse().unwrap_or_default(), q.parse().unwrap_or_default());
                    if !q.is_zero() && !q.is_one() && !p.gcd(&q).is_one() {
                        out.push(frac);
                    }
                }
            }
        } else {
            i += 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsJson {
    pub e: Vec<Vec<Vec<String>>>,
    pub f: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub h: Option<Vec<Vec<Vec<String>>>>,
    /// Entries of the `lambda^1` part of `Lambda`.
    #[serde(default)]
    pub lambda_part: Option<Vec<Vec<String>>>,
}

/// Realization descriptor: a standard family and rank, or explicit generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationJson {
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub generators: Option<GeneratorsJson>,
    #[serde(default)]
    pub normalization: Option<Normalization>,
    /// `Lambda_l` pinned by time label (`"3"`, `"3p"`), as `{lambda, matrix}` terms.
    #[serde(default)]
    pub overrides: BTreeMap<String, Vec<LaurentTerm>>,
}

fn rational_matrix(rows: &[Vec<String>], what: &str) -> Result<QMatrix> {
    let parsed: Result<Vec<Vec<Rational>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_rational(s).map_err(|e| Error::Invalid(format!("{what}: `{s}`: {e}"))))
                .collect()
        })
        .collect();
    Matrix::from_rows(parsed?)
}

pub fn parse_realization(text: &str) -> Result<Realization> {
    let d: RealizationJson = serde_json::from_str(text).map_err(json_error)?;
    let family = d.family.as_deref().map(Family::parse).transpose()?;
    let mut overrides = BTreeMap::new();
    for (label, terms) in &d.overrides {
        let t = Time::parse(label).ok_or_else(|| Error::Invalid(format!("bad time label `{label}`")))?;
        let text = serde_json::to_string(terms).expect("serializable");
        let x = parse_laurent(&text)?
            .to_rational()
            .ok_or_else(|| Error::Invalid(format!("override {label} has non-constant entries")))?;
        overrides.insert(t, x);
    }
    match (&d.generators, family, d.rank) {
        (None, Some(f), Some(n)) => {
            let mut gens = standard_generators(f, n)?;
            gens.normalization = d.normalization.unwrap_or_default();
            gens.overrides.extend(overrides);
            from_generators(gens)
        }
        (Some(g), _, _) => {
            let mats = |v: &[Vec<Vec<String>>], what: &str| -> Result<Vec<QMatrix>> {
                v.iter().map(|m| rational_matrix(m, what)).collect()
            };
            let gens = GeneratorSet {
                e: mats(&g.e, "e")?,
                f: mats(&g.f, "f")?,
                h: g.h.as_deref().map(|h| mats(h, "h")).transpose()?,
                lambda_part: g.lambda_part.as_deref().map(|m| rational_matrix(m, "lambda_part")).transpose()?,
                family_hint: family,
                normalization: d.normalization.unwrap_or_default(),
                overrides,
            };
            from_generators(gens)
        }
        _ => Err(Error::Invalid(
            "realization needs `family` and `rank`, or `generators`".into(),
        )),
    }
}

pub fn rational_matrix_to_json(a: &QMatrix) -> Value {
    Value::Array(
        a.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|c| Value::String(format_rational(c))).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_realization, Family};

    #[test]
    fn single_term() {
        let x = parse_laurent(r#"{"lambda": -1, "matrix": [["0","0"],["1","0"]]}"#).unwrap();
        assert_eq!(x.min_power(), Some(-1));
        assert_eq!(x.block(-1)[(1, 0)], Poly::one());
        let back = laurent_to_json(&x).to_string();
        assert_eq!(parse_laurent(&back).unwrap(), x);
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = parse_laurent("{\"lambda\": -1,\n \"matrix\": [[\"0\",]]}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        assert!(parse_laurent(r#"{"lambda": -1, "matrix": [["0"],["1","0"]]}"#).is_err());
        assert!(parse_laurent(r#"{"lambda": -1, "matrix": [["1"]], "extra": 1}"#).is_err());
    }

    #[test]
    fn fractions() {
        assert_eq!(unreduced_fractions("2/4*t1 + 1/3 + 6/3"), vec!["2/4", "6/3"]);
        assert!(unreduced_fractions("a1/2").is_empty());
    }

    #[test]
    fn realization_descriptors() {
        let r = parse_realization(r#"{"family": "B", "rank": 2}"#).unwrap();
        assert_eq!((r.family, r.m), (Family::B, 5));
        let a1 = build_realization(Family::A, 1).unwrap();
        let g = |m: &QMatrix| rational_matrix_to_json(m);
        let text = serde_json::json!({
            "generators": {"e": [g(&a1.e[0])], "f": [g(&a1.f[0])]}
        })
        .to_string();
        let r = parse_realization(&text).unwrap();
        assert_eq!(r.m, 2);
        assert!(parse_realization(r#"{"family": "B"}"#).is_err());
        assert!(parse_realization(r#"{"family": "B", "rank": 2, "colour": 1}"#).is_err());
    }
}
