//! JSON documents for functions and junta collections.
//!
//! Numbers may be JSON numbers or strings (`"1/3"`, `"0.25"`, `"1e-3"`); both
//! are read exactly. Coordinates are 0-based.

use serde_json::{json, Map, Value};

use crate::boolfn::{Builtin, FunctionKind, FunctionRep, RangeTag};
use crate::error::{Error, Result};
use crate::pseudojunta::{Detector, JuntaCollection};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::space::ProductSpace;
use crate::subset::Subset;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Reads a number given as a JSON number or a string.
pub fn parse_number(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(bad(format!("expected a number, got {other}"))),
    }
}

fn parse_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("`{what}` must be a non-negative integer, got {v}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be a JSON object")))
}

/// Number of coordinates a document asks for, if it says.
fn declared_n(doc: &Map<String, Value>) -> Result<Option<usize>> {
    if let Some(n) = doc.get("n") {
        return parse_usize(n, "n").map(Some);
    }
    if let Some(Value::Object(s)) = doc.get("space") {
        if let Some(n) = s.get("n") {
            return parse_usize(n, "n").map(Some);
        }
        if let Some(Value::Array(c)) = s.get("coords") {
            if c.len() > 1 {
                return Ok(Some(c.len()));
            }
        }
    }
    Ok(None)
}

/// Builds the space of a document. Without a `"space"` entry the space is
/// the uniform cube `{0,1}^n`.
pub fn load_space<T: Scalar>(doc: &Value, n: usize) -> Result<ProductSpace<T>> {
    let doc = object(doc, "document")?;
    let Some(space) = doc.get("space") else {
        return ProductSpace::p_biased(n, T::from_ratio(1, 2));
    };
    let space = object(space, "`space`")?;
    let kind = space.get("kind").and_then(Value::as_str).unwrap_or("p-biased");
    match kind {
        "p-biased" | "pbiased" => {
            let p = space.get("p").ok_or_else(|| bad("p-biased space needs `p`"))?;
            match p {
                Value::Array(ps) => {
                    if ps.len() != n {
                        return Err(bad(format!("{} biases given for n={n}", ps.len())));
                    }
                    let weights = ps
                        .iter()
                        .map(|p| {
                            let p = parse_number(p)?;
                            Ok(vec![
                                T::from_rational(&(Rational::from_integer(1.into()) - &p)),
                                T::from_rational(&p),
                            ])
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ProductSpace::new(weights)
                }
                p => ProductSpace::p_biased(n, T::from_rational(&parse_number(p)?)),
            }
        }
        "finite" => {
            let coords = space
                .get("coords")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("finite space needs `coords`"))?;
            let rows: Vec<Vec<T>> = coords
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("each entry of `coords` must be a list of weights"))?
                        .iter()
                        .map(|w| parse_number(w).map(|r| T::from_rational(&r)))
                        .collect()
                })
                .collect::<Result<_>>()?;
            let weights = match rows.len() {
                1 => vec![rows[0].clone(); n],
                m if m == n => rows,
                m => return Err(bad(format!("{m} coordinate weight lists given for n={n}"))),
            };
            ProductSpace::new(weights)
        }
        other => Err(bad(format!("unknown space kind `{other}`"))),
    }
}

fn bitstring(s: &str) -> Result<Vec<Rational>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| match c {
            '0' => Ok(Rational::from_integer(0.into())),
            '1' => Ok(Rational::from_integer(1.into())),
            other => Err(bad(format!("bitstring contains `{other}`"))),
        })
        .collect()
}

fn table_values(v: &Value) -> Result<Vec<Rational>> {
    match v {
        Value::String(s) => bitstring(s),
        Value::Array(a) => a.iter().map(parse_number).collect(),
        other => Err(bad(format!("table must be a bitstring or a list, got {other}"))),
    }
}

fn builtin_from(name: &str, params: Option<&Value>) -> Result<Builtin> {
    let param = match params {
        None | Some(Value::Null) => None,
        Some(p) => {
            let p = object(p, "`params`")?;
            let mut found = None;
            for key in ["i", "t", "w"] {
                if let Some(v) = p.get(key) {
                    found = Some(parse_usize(v, key)?);
                }
            }
            found
        }
    };
    Builtin::parse(name, param)
}

enum Body {
    Table(Vec<Rational>, Option<RangeTag>),
    Builtin(Builtin),
}

fn function_body(doc: &Map<String, Value>) -> Result<Body> {
    if let Some(name) = doc.get("builtin") {
        let name = name.as_str().ok_or_else(|| bad("`builtin` must be a name"))?;
        return Ok(Body::Builtin(builtin_from(name, doc.get("params"))?));
    }
    if let Some(t) = doc.get("table") {
        return Ok(Body::Table(table_values(t)?, None));
    }
    let f = object(doc.get("function").ok_or_else(|| bad("document has no `function`"))?, "`function`")?;
    match f.get("kind").and_then(Value::as_str) {
        Some("table") => {
            let values = table_values(f.get("values").ok_or_else(|| bad("table function needs `values`"))?)?;
            let range = match f.get("range").and_then(Value::as_str) {
                None => None,
                Some("boolean") => Some(RangeTag::Boolean),
                Some("real") => Some(RangeTag::Real),
                Some(other) => return Err(bad(format!("unknown range `{other}`"))),
            };
            Ok(Body::Table(values, range))
        }
        Some("builtin") => {
            let name =
                f.get("name").and_then(Value::as_str).ok_or_else(|| bad("builtin function needs `name`"))?;
            Ok(Body::Builtin(builtin_from(name, f.get("params"))?))
        }
        Some(other) => Err(bad(format!("unknown function kind `{other}`"))),
        None => Err(bad("function needs `kind`")),
    }
}

/// Loads a function document.
///
/// Accepted forms: `{"n", "space", "function": {"kind": "table", "values"}}`,
/// `{"n", "space", "function": {"kind": "builtin", "name", "params"}}` and the
/// shorthands `{"builtin": "or", "n": 3}` and `{"table": "0110"}`. For a
/// table on a binary space `n` may be omitted.
pub fn load_function<T: Scalar>(doc: &Value) -> Result<FunctionRep<T>> {
    load_function_capped(doc, None)
}

/// [`load_function`] with an explicit enumeration cap.
pub fn load_function_capped<T: Scalar>(doc: &Value, cap: Option<u64>) -> Result<FunctionRep<T>> {
    let obj = object(doc, "function document")?;
    let body = function_body(obj)?;
    let n = match (declared_n(obj)?, &body) {
        (Some(n), _) => n,
        (None, Body::Table(v, _)) => {
            let len = v.len();
            if len < 2 || !len.is_power_of_two() {
                return Err(bad(format!("cannot infer n from a table of {len} entries; give `n`")));
            }
            len.trailing_zeros() as usize
        }
        (None, Body::Builtin(_)) => return Err(bad("builtin function needs `n`")),
    };
    let mut space = load_space::<T>(doc, n)?;
    if let Some(cap) = cap {
        space = space.with_enum_cap(cap);
    }
    match body {
        Body::Builtin(b) => FunctionRep::builtin(space, b),
        Body::Table(values, range) => {
            let boolean = values
                .iter()
                .all(|v| *v == Rational::from_integer(0.into()) || *v == Rational::from_integer(1.into()));
            let range = range.unwrap_or(if boolean { RangeTag::Boolean } else { RangeTag::Real });
            let values = values.iter().map(T::from_rational).collect();
            FunctionRep::from_table(space, values, range)
        }
    }
}

fn number_json<T: Scalar>(v: &T) -> Value {
    v.to_json()
}

/// The `space` part of a document.
pub fn space_to_json<T: Scalar>(space: &ProductSpace<T>) -> Value {
    match space.common_bias() {
        Some(p) => json!({"kind": "p-biased", "p": number_json(p)}),
        None => json!({
            "kind": "finite",
            "coords": (0..space.n())
                .map(|i| space.weights(i).iter().map(number_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
    }
}

/// A document [`load_function`] reads back to an equal function.
pub fn function_to_json<T: Scalar>(f: &FunctionRep<T>) -> Value {
    let function = match f.kind() {
        FunctionKind::Builtin(b) => {
            let mut out = json!({"kind": "builtin", "name": b.name()});
            if let (Some(p), Some(key)) = (b.param(), param_key(b)) {
                out["params"] = json!({ key: p });
            }
            out
        }
        FunctionKind::Table(values) => json!({
            "kind": "table",
            "range": if f.is_boolean() { "boolean" } else { "real" },
            "values": values.iter().map(|v| if f.is_boolean() { json!(if v.is_zero() { 0 } else { 1 }) } else { v.to_json() }).collect::<Vec<_>>(),
        }),
    };
    json!({"n": f.n(), "space": space_to_json(f.space()), "function": function})
}

fn param_key(b: &Builtin) -> Option<&'static str> {
    match b {
        Builtin::Dictator(_) => Some("i"),
        Builtin::Threshold(_) => Some("t"),
        Builtin::Tribes(_) => Some("w"),
        _ => None,
    }
}

fn detector_from(v: &Value, size: usize) -> Result<Detector> {
    let j = object(v, "`J`")?;
    match j.get("kind").and_then(Value::as_str) {
        Some("all-ones-indicator") | Some("all-ones") => Ok(Detector::AllOnes),
        Some("constant") | Some("const") => {
            let value = j.get("value").ok_or_else(|| bad("constant detector needs `value`"))?;
            let b = match value {
                Value::Bool(b) => *b,
                v => {
                    let r = parse_number(v)?;
                    if r == Rational::from_integer(0.into()) {
                        false
                    } else if r == Rational::from_integer(1.into()) {
                        true
                    } else {
                        return Err(bad(format!("constant detector value {v} is not 0 or 1")));
                    }
                }
            };
            Ok(Detector::Const(b))
        }
        Some("table") => {
            let values = table_values(j.get("values").ok_or_else(|| bad("table detector needs `values`"))?)?;
            if values.len() != size {
                return Err(Error::TableLengthMismatch { got: values.len(), expected: size });
            }
            values
                .iter()
                .enumerate()
                .map(|(index, v)| {
                    if *v == Rational::from_integer(0.into()) {
                        Ok(false)
                    } else if *v == Rational::from_integer(1.into()) {
                        Ok(true)
                    } else {
                        Err(Error::NonBooleanValue { index, value: v.to_string() })
                    }
                })
                .collect::<Result<Vec<_>>>()
                .map(Detector::Table)
        }
        Some(other) => Err(bad(format!("unknown detector kind `{other}`"))),
        None => Err(bad("detector needs `kind`")),
    }
}

/// Loads a collection `{"entries": [{"S": [..], "J": {..}}]}` over `space`.
///
/// Detector kinds: `table` (values over `X^S` in enumeration order),
/// `all-ones-indicator` and `constant` (with `value`). The string
/// `"or-example"` in place of the object gives `J_S = 1[x_S = 1..1]` for
/// every `S`.
pub fn load_collection<T: Scalar>(doc: &Value, space: &ProductSpace<T>) -> Result<JuntaCollection<T>> {
    if doc.as_str() == Some("or-example") {
        return JuntaCollection::or_example(space.clone());
    }
    let entries = object(doc, "collection")?
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("collection needs `entries`"))?;
    let mut c = JuntaCollection::new(space.clone());
    for e in entries {
        let e = object(e, "collection entry")?;
        let idx = e
            .get("S")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("collection entry needs `S`"))?
            .iter()
            .map(|v| parse_usize(v, "S"))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&i) = idx.iter().find(|&&i| i >= space.n()) {
            return Err(Error::CoordinateOutOfRange { coord: i, n: space.n() });
        }
        let s = Subset::from_indices(idx);
        let size = space.check_enumerable(s)?;
        let j = detector_from(e.get("J").ok_or_else(|| bad("collection entry needs `J`"))?, size)?;
        c.insert(s, j)?;
    }
    Ok(c)
}

/// The collection in the format [`load_collection`] reads.
pub fn collection_to_json<T: Scalar>(c: &JuntaCollection<T>) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .iter()
        .map(|e| {
            let j = match e.detector() {
                Detector::Const(b) => json!({"kind": "constant", "value": u8::from(*b)}),
                Detector::AllOnes => json!({"kind": "all-ones-indicator"}),
                Detector::Table(bits) => {
                    json!({"kind": "table", "values": bits.iter().map(|&b| u8::from(b)).collect::<Vec<_>>()})
                }
            };
            json!({"S": e.set().indices(), "J": j})
        })
        .collect();
    json!({ "entries": entries })
}
