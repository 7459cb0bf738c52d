//! JSON documents read and written by the tool.
//!
//! Integers are JSON integers or decimal strings (for values beyond 64
//! bits). Rationals are strings `"p/q"` or `"p"`, reduced, `q > 0`.
//! Floating-point literals are rejected wherever an exact value is expected.
//! Unknown fields are errors.
//!
//! ```json
//! {"version": 1, "N": 2, "levels": [
//!   {"basis": [[1, 0]], "L": {"d": 1, "coeffs": [["1", "0"], ["0", "0"]]}},
//!   {"basis": [[1, 0], [0, 1]], "L": {"d": 1, "coeffs": [["0", "0"], ["1", "0"]]}}
//! ]}
//! {"version": 1, "N": 2, "terms": [{"freq": [1, 2], "re": 5.0, "im": 0.0}]}
//! {"version": 1, "N": 2, "vectors": [[1, 0], [-1, 1]]}
//! {"version": 1, "N": 2, "psi": [[1, 1], [0, 1]]}
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use ordembed_core::lattice::{is_squarefree, Scalar, ScalarFunctional};
use ordembed_core::{IntMatrix, IntVector, Level, OrderSpec, Subgroup, TrigPoly};

pub const FORMAT_VERSION: u64 = 1;

/// A document that failed to parse; `line`/`column` are 1-based and 0 when
/// the problem is not tied to a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn semantic(message: impl Into<String>) -> ParseError {
        ParseError {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> ParseError {
        // serde_json appends " at line L column C"; keep the bare message.
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(i) if e.line() > 0 => full[..i].to_string(),
            _ => full,
        };
        ParseError {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(
                f,
                "line {}, column {}: {}",
                self.line, self.column, self.message
            )
        } else {
            f.write_str(&self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// Exact integer: a JSON integer or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or an integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonInt, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} where an integer is required (large integers go in strings)"
                )))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                parse_int(v).map(JsonInt).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int_to_json(&self.0).serialize(s)
    }
}

/// Integers that fit in 64 bits print as numbers, others as strings.
pub fn int_to_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => json!(i),
        Err(_) => json!(v.to_string()),
    }
}

pub fn vector_to_json(v: &IntVector) -> Value {
    Value::Array(v.entries().iter().map(int_to_json).collect())
}

pub fn matrix_rows_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(&m.row(i))).collect())
}

pub fn matrix_columns_to_json(m: &IntMatrix) -> Value {
    Value::Array(m.columns().iter().map(vector_to_json).collect())
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid integer {s:?}"));
    }
    BigInt::from_str(t).map_err(|_| format!("invalid integer {s:?}"))
}

/// Reduced rational `"p/q"` or integer `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (parse_int(p)?, parse_int(q)?),
        None => (parse_int(s)?, BigInt::one()),
    };
    if !q.is_positive() {
        return Err(format!("rational {s:?} needs a positive denominator"));
    }
    if !p.gcd(&q).is_one() && !(p.is_zero() && q.is_one()) {
        return Err(format!("rational {s:?} is not in lowest terms"));
    }
    Ok(BigRational::new_raw(p, q))
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct JsonRational(BigRational);

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonRational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonRational, E> {
                Ok(JsonRational(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonRational, E> {
                Ok(JsonRational(BigRational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonRational, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} where an exact rational is required (write \"p/q\")"
                )))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonRational, E> {
                parse_rational(v).map(JsonRational).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn check_version(v: u64) -> Result<(), ParseError> {
    if v != FORMAT_VERSION {
        return Err(ParseError::semantic(format!(
            "unsupported version {v} (expected {FORMAT_VERSION})"
        )));
    }
    Ok(())
}

fn to_vector(n: usize, v: Vec<JsonInt>, what: &str) -> Result<IntVector, ParseError> {
    if v.len() != n {
        return Err(ParseError::semantic(format!(
            "{what} has {} entries, expected N = {n}",
            v.len()
        )));
    }
    Ok(IntVector::new(v.into_iter().map(|x| x.0).collect()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctional {
    d: u64,
    coeffs: Vec<(JsonRational, JsonRational)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    basis: Vec<Vec<JsonInt>>,
    #[serde(rename = "L")]
    l: RawFunctional,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrder {
    version: u64,
    #[serde(rename = "N")]
    n: usize,
    levels: Vec<RawLevel>,
}

/// Parses an order document. The result is structurally sound but not
/// validated; run [`OrderSpec::validate`] for the order conditions.
pub fn parse_order(text: &str) -> Result<OrderSpec, ParseError> {
    let raw: RawOrder = serde_json::from_str(text)?;
    check_version(raw.version)?;
    let n = raw.n;
    if n == 0 {
        return Err(ParseError::semantic("N must be at least 1"));
    }
    let mut levels = Vec::with_capacity(raw.levels.len());
    for (j, level) in raw.levels.into_iter().enumerate() {
        let j = j + 1;
        let basis = level
            .basis
            .into_iter()
            .map(|v| to_vector(n, v, &format!("level {j} basis vector")))
            .collect::<Result<Vec<_>, _>>()?;
        let d = level.l.d;
        if d == 0 || !is_squarefree(d) {
            return Err(ParseError::semantic(format!(
                "level {j}: d = {d} is not a squarefree positive integer"
            )));
        }
        if level.l.coeffs.len() != n {
            return Err(ParseError::semantic(format!(
                "level {j}: L has {} coefficients, expected N = {n}",
                level.l.coeffs.len()
            )));
        }
        let coeffs = level
            .l
            .coeffs
            .into_iter()
            .map(|(a, b)| Scalar::new(a.0, b.0, d))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ParseError::semantic(format!("level {j}: {e}")))?;
        let functional = ScalarFunctional::new(coeffs)
            .map_err(|e| ParseError::semantic(format!("level {j}: {e}")))?;
        levels.push(Level {
            subgroup: Subgroup::from_vectors(n, &basis),
            functional,
        });
    }
    OrderSpec::new(n, levels).map_err(|e| ParseError::semantic(e.to_string()))
}

pub fn order_to_json(spec: &OrderSpec) -> Value {
    let levels: Vec<Value> = spec
        .levels()
        .iter()
        .map(|level| {
            let f = &level.functional;
            let coeffs: Vec<Value> = f
                .rational_parts()
                .iter()
                .zip(f.irrational_parts())
                .map(|(a, b)| json!([rational_to_string(a), rational_to_string(&b)]))
                .collect();
            json!({
                "basis": matrix_columns_to_json(level.subgroup.basis()),
                "L": {"d": f.radicand(), "coeffs": coeffs},
            })
        })
        .collect();
    json!({"version": FORMAT_VERSION, "N": spec.dim(), "levels": levels})
}

pub fn print_order(spec: &OrderSpec) -> String {
    pretty(&order_to_json(spec))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    freq: Vec<JsonInt>,
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    version: u64,
    #[serde(rename = "N")]
    n: usize,
    terms: Vec<RawTerm>,
}

/// Parses a polynomial document; duplicate frequencies are rejected and
/// zero coefficients dropped.
pub fn parse_poly(text: &str) -> Result<TrigPoly, ParseError> {
    let raw: RawPoly = serde_json::from_str(text)?;
    check_version(raw.version)?;
    if raw.n == 0 {
        return Err(ParseError::semantic("N must be at least 1"));
    }
    let mut terms = Vec::with_capacity(raw.terms.len());
    for (i, t) in raw.terms.into_iter().enumerate() {
        let k = to_vector(raw.n, t.freq, &format!("term {} frequency", i + 1))?;
        terms.push((k, Complex64::new(t.re, t.im)));
    }
    TrigPoly::from_terms(raw.n, terms).map_err(|e| ParseError::semantic(e.to_string()))
}

pub fn terms_to_json(f: &TrigPoly) -> Value {
    Value::Array(
        f.terms()
            .map(|(k, c)| json!({"freq": vector_to_json(k), "re": c.re, "im": c.im}))
            .collect(),
    )
}

pub fn poly_to_json(f: &TrigPoly) -> Value {
    json!({"version": FORMAT_VERSION, "N": f.dim(), "terms": terms_to_json(f)})
}

pub fn print_poly(f: &TrigPoly) -> String {
    pretty(&poly_to_json(f))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    version: u64,
    #[serde(rename = "N")]
    n: usize,
    vectors: Vec<Vec<JsonInt>>,
}

/// Parses a vector-set document into `(N, vectors)`.
pub fn parse_set(text: &str) -> Result<(usize, Vec<IntVector>), ParseError> {
    let raw: RawSet = serde_json::from_str(text)?;
    check_version(raw.version)?;
    let vectors = raw
        .vectors
        .into_iter()
        .enumerate()
        .map(|(i, v)| to_vector(raw.n, v, &format!("vector {}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((raw.n, vectors))
}

pub fn print_set(n: usize, vectors: &[IntVector]) -> String {
    let vs: Vec<Value> = vectors.iter().map(vector_to_json).collect();
    pretty(&json!({"version": FORMAT_VERSION, "N": n, "vectors": vs}))
}

/// Reads a `ψ` matrix (row-major) from a `psi` document or from a report
/// that carries it under `result.psi`.
pub fn parse_psi(text: &str) -> Result<IntMatrix, ParseError> {
    let value: Value = serde_json::from_str(text)?;
    let rows = value
        .get("psi")
        .or_else(|| value.get("result").and_then(|r| r.get("psi")))
        .ok_or_else(|| ParseError::semantic("no \"psi\" matrix in document"))?;
    let rows: Vec<Vec<JsonInt>> =
        Vec::deserialize(rows).map_err(|e| ParseError::semantic(format!("psi: {e}")))?;
    let n = rows.len();
    if n == 0 {
        return Err(ParseError::semantic("psi is empty"));
    }
    let mut m = IntMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != n {
            return Err(ParseError::semantic(format!(
                "psi row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        for (j, v) in row.into_iter().enumerate() {
            m[(i, j)] = v.0;
        }
    }
    Ok(m)
}

pub fn print_psi(psi: &IntMatrix) -> String {
    pretty(&json!({"version": FORMAT_VERSION, "N": psi.rows(), "psi": matrix_rows_to_json(psi)}))
}

/// A vector given on the command line: `[1,-2]` or `1,-2`.
pub fn parse_vector_arg(s: &str) -> Result<IntVector, ParseError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .unwrap_or(t);
    let entries = inner
        .split(',')
        .map(|e| parse_int(e).map_err(ParseError::semantic))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntVector::new(entries))
}

/// Indented JSON with arrays of scalars (vectors, matrix rows) kept on
/// one line.
pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    write_pretty(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_pretty(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat("  ").take(n));
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_pretty(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_pretty(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
