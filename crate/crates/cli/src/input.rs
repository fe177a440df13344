//! JSON input schemas. Four kinds are accepted, distinguished by their
//! top-level keys:
//!
//! - cube:      `{"weights": [w..], "points": [[bit..]..]}`
//! - l1 points: `{"points": [[coord..]..]}`
//! - tree:      `{"vertices": n, "edges": [[u, v, w]..]}`
//! - raw:       `{"matrix": [[d..]..]}`
//!
//! Numeric entries are JSON numbers (integers and decimals are read
//! exactly) or `"p/q"` strings.

use cubemetrics::hamming::{CubePoint, CubeSubset, WeightList};
use cubemetrics::report::AnalysisInput;
use cubemetrics::trees::WeightedTree;
use cubemetrics::{Matrix, Scalar, Vector};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use serde_json::Value;

/// Parse-stage failure: maps to exit code 2.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

/// Exact rational from a JSON literal: integer, decimal, or `"p/q"`.
pub fn rational_from_value(v: &Value) -> Result<BigRational, ParseError> {
    match v {
        Value::Number(n) => rational_from_literal(&n.to_string()),
        Value::String(s) => rational_from_literal(s),
        other => err(format!("expected a number or \"p/q\" string, got {other}")),
    }
}

fn rational_from_literal(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseError(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseError(format!("bad denominator in {s:?}")))?;
        if d == BigInt::from(0) {
            return err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac)) = s.split_once('.') {
        let digits = format!("{}{}", int_part, frac);
        let n: BigInt = digits
            .parse()
            .map_err(|_| ParseError(format!("bad decimal literal {s:?}")))?;
        let mut d = BigInt::one();
        for _ in 0..frac.len() {
            d *= 10;
        }
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| ParseError(format!("bad integer literal {s:?}")))?;
    Ok(BigRational::from_integer(n))
}

fn scalar_from_value(v: &Value) -> Result<Scalar, ParseError> {
    Ok(Scalar::from_rational(rational_from_value(v)?))
}

fn scalar_row(v: &Value, what: &str) -> Result<Vec<Scalar>, ParseError> {
    let Value::Array(items) = v else {
        return err(format!("{what} must be an array"));
    };
    items.iter().map(scalar_from_value).collect()
}

/// Decides the schema by its keys and parses accordingly.
pub fn parse_input(text: &str) -> Result<AnalysisInput, ParseError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| ParseError(format!("invalid JSON: {e}")))?;
    let Value::Object(map) = &value else {
        return err("top level must be a JSON object");
    };
    if map.contains_key("weights") && map.contains_key("points") {
        return Ok(AnalysisInput::Cube(parse_cube(&value)?));
    }
    if map.contains_key("points") {
        let Value::Array(rows) = &map["points"] else {
            return err("\"points\" must be an array of coordinate rows");
        };
        let points: Vec<Vector> = rows
            .iter()
            .map(|r| {
                let coords = scalar_row(r, "point")?;
                Vector::new(coords).map_err(|e| ParseError(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        return Ok(AnalysisInput::L1Points(points));
    }
    if map.contains_key("vertices") && map.contains_key("edges") {
        return Ok(AnalysisInput::Tree(parse_tree(&value)?));
    }
    if map.contains_key("matrix") {
        let Value::Array(rows) = &map["matrix"] else {
            return err("\"matrix\" must be an array of rows");
        };
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| scalar_row(r, "matrix row"))
            .collect::<Result<_, _>>()?;
        let matrix = Matrix::from_rows(rows).map_err(|e| ParseError(e.to_string()))?;
        return Ok(AnalysisInput::Raw(matrix));
    }
    err("unrecognized schema: expected cube, l1 points, tree, or raw matrix keys")
}

pub fn parse_cube(value: &Value) -> Result<CubeSubset, ParseError> {
    let Value::Object(map) = value else {
        return err("cube input must be an object");
    };
    let weights = scalar_row(
        map.get("weights")
            .ok_or(ParseError("missing \"weights\"".into()))?,
        "weights",
    )?;
    let weights = WeightList::new(weights).map_err(|e| ParseError(e.to_string()))?;
    let Some(Value::Array(rows)) = map.get("points") else {
        return err("missing \"points\" array");
    };
    let mut points = Vec::with_capacity(rows.len());
    for row in rows {
        let Value::Array(bits) = row else {
            return err("each cube point must be an array of bits");
        };
        let mut bools = Vec::with_capacity(bits.len());
        for b in bits {
            match b {
                Value::Number(n) if n.to_string() == "0" => bools.push(false),
                Value::Number(n) if n.to_string() == "1" => bools.push(true),
                other => return err(format!("cube point entries must be 0 or 1, got {other}")),
            }
        }
        points.push(CubePoint::new(bools));
    }
    CubeSubset::new(weights, points).map_err(|e| ParseError(e.to_string()))
}

pub fn parse_tree(value: &Value) -> Result<WeightedTree, ParseError> {
    let Value::Object(map) = value else {
        return err("tree input must be an object");
    };
    let vertices = match map.get("vertices") {
        Some(Value::Number(n)) => n
            .to_string()
            .parse::<usize>()
            .map_err(|_| ParseError("\"vertices\" must be a nonnegative integer".into()))?,
        _ => return err("missing integer \"vertices\""),
    };
    let Some(Value::Array(edges)) = map.get("edges") else {
        return err("missing \"edges\" array");
    };
    let mut parsed = Vec::with_capacity(edges.len());
    for e in edges {
        let Value::Array(triple) = e else {
            return err("each edge must be [u, v, weight]");
        };
        if triple.len() != 3 {
            return err("each edge must be [u, v, weight]");
        }
        let u = endpoint(&triple[0])?;
        let v = endpoint(&triple[1])?;
        let w = scalar_from_value(&triple[2])?;
        parsed.push((u, v, w));
    }
    WeightedTree::new(vertices, parsed).map_err(|e| ParseError(e.to_string()))
}

fn endpoint(v: &Value) -> Result<usize, ParseError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<usize>()
            .map_err(|_| ParseError("edge endpoints must be nonnegative integers".into())),
        _ => err("edge endpoints must be nonnegative integers"),
    }
}

/// Cube subset back to its JSON schema (`parse . emit` is the identity).
pub fn emit_cube(cube: &CubeSubset) -> Value {
    let weights: Vec<Value> = cube
        .weights()
        .as_slice()
        .iter()
        .map(super::output::scalar_to_json)
        .collect();
    let points: Vec<Value> = cube
        .points()
        .iter()
        .map(|p| {
            Value::Array(
                p.bits()
                    .iter()
                    .map(|&b| Value::Number(serde_json::Number::from(u8::from(b))))
                    .collect(),
            )
        })
        .collect();
    serde_json::json!({ "weights": weights, "points": points })
}
