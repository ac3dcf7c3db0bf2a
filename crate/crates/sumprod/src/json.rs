//! JSON-lines report schema. Big integers and rationals are strings, never
//! floats; non-finite reals become `null`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Number, Value as Json};
use sumprod_core::harness::{CheckReport, Lhs, Params, Value};
use sumprod_core::rational::parse_rational;

use crate::{CliError, CliResult};

pub const SCHEMA_VERSION: u64 = 1;

fn real(x: f64) -> Json {
    Number::from_f64(x).map_or(Json::Null, Json::Number)
}

fn rational(q: &BigRational) -> Json {
    Json::String(q.to_string())
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Int(i) => json!(i),
        Value::Big(b) => Json::String(b.to_string()),
        Value::Real(x) => real(*x),
        Value::Rational(q) => rational(q),
        Value::Bool(b) => json!(b),
        Value::Text(s) => json!(s),
        Value::Set(s) => json!(s),
        Value::Sets(s) => json!(s),
        Value::RationalSet(s) => Json::Array(s.iter().map(rational).collect()),
        Value::Points(ps) => json!(ps),
        Value::Planes(ps) => json!(ps),
    }
}

fn map_of<'a>(items: impl Iterator<Item = (&'a String, &'a Value)>) -> Json {
    Json::Object(items.map(|(k, v)| (k.clone(), value_to_json(v))).collect::<Map<_, _>>())
}

pub fn report_to_json(r: &CheckReport) -> Json {
    let mut obj = Map::new();
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("check_id".into(), json!(r.check_id.name()));
    obj.insert("mode".into(), json!(r.check_id.mode().name()));
    obj.insert("params".into(), map_of(r.params.iter()));
    obj.insert(
        "lhs".into(),
        match &r.lhs {
            Some(Lhs::Exact(n)) => Json::String(n.to_string()),
            Some(Lhs::Real(x)) => real(*x),
            None => Json::Null,
        },
    );
    obj.insert("rhs_shape".into(), r.rhs_shape.map_or(Json::Null, real));
    if let Some(c) = r.implied_constant {
        obj.insert("implied_constant".into(), real(c));
    }
    obj.insert("verdict".into(), json!(r.verdict.name()));
    obj.insert("details".into(), map_of(r.details.iter()));
    obj.insert("elapsed_ms".into(), r.elapsed_ms.map_or(Json::Null, |ms| json!(ms)));
    Json::Object(obj)
}

pub fn report_line(r: &CheckReport) -> String {
    serde_json::to_string(&report_to_json(r)).expect("reports always serialize")
}

fn json_to_value(key: &str, v: &Json) -> CliResult<Value> {
    let bad = |what: &str| CliError::malformed(&format!("params.{key}"), what);
    Ok(match v {
        Json::Bool(b) => Value::Bool(*b),
        Json::Number(n) => match n.as_i64() {
            Some(i) => Value::Int(i),
            None => Value::Real(n.as_f64().ok_or_else(|| bad("unrepresentable number"))?),
        },
        Json::String(s) if s.contains('/') => {
            Value::Rational(parse_rational(s).ok_or_else(|| bad("expected a rational `num/den`"))?)
        }
        Json::String(s) => match s.parse::<BigInt>() {
            Ok(i) => Value::Rational(BigRational::from_integer(i)),
            Err(_) => Value::Text(s.clone()),
        },
        Json::Array(items) if items.iter().all(Json::is_u64) => {
            Value::Set(items.iter().map(|x| x.as_u64().unwrap()).collect())
        }
        Json::Array(items) if items.iter().all(|x| x.is_string() || x.is_i64()) => Value::RationalSet(
            items
                .iter()
                .map(|x| match x {
                    Json::String(s) => parse_rational(s).ok_or_else(|| bad("expected rationals")),
                    _ => Ok(BigRational::from_integer(x.as_i64().unwrap().into())),
                })
                .collect::<CliResult<_>>()?,
        ),
        Json::Array(items) if items.iter().all(Json::is_array) => {
            let rows = items
                .iter()
                .map(|row| {
                    row.as_array()
                        .unwrap()
                        .iter()
                        .map(|x| x.as_u64().ok_or_else(|| bad("expected nonnegative integers")))
                        .collect::<CliResult<Vec<u64>>>()
                })
                .collect::<CliResult<Vec<_>>>()?;
            let fixed = |n: usize| rows.iter().all(|r| r.len() == n);
            match key {
                "points" if fixed(3) => Value::Points(rows.iter().map(|r| [r[0], r[1], r[2]]).collect()),
                "planes" if fixed(4) => Value::Planes(rows.iter().map(|r| [r[0], r[1], r[2], r[3]]).collect()),
                "points" | "planes" => return Err(bad("wrong number of coordinates")),
                _ => Value::Sets(rows),
            }
        }
        _ => return Err(bad("unsupported value")),
    })
}

/// A parameter bag from a JSON object, e.g. `{"p": 7, "A": [1, 2, 4], "k": 2}`.
pub fn params_from_json(v: &Json) -> CliResult<Params> {
    let obj = v.as_object().ok_or_else(|| CliError::malformed("params", "expected a JSON object"))?;
    let mut params = Params::new();
    for (k, v) in obj {
        params.insert(k, json_to_value(k, v)?);
    }
    Ok(params)
}

/// The fields of a serialized report that summaries and plots need.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub check_id: String,
    pub verdict: String,
    pub implied_constant: Option<f64>,
    pub params: Map<String, Json>,
    pub details: Map<String, Json>,
}

impl ReportRow {
    pub fn param_int(&self, key: &str) -> Option<i64> {
        self.params.get(key).and_then(Json::as_i64)
    }

    pub fn param_len(&self, key: &str) -> Option<usize> {
        self.params.get(key).and_then(Json::as_array).map(Vec::len)
    }

    pub fn detail_f64(&self, key: &str) -> Option<f64> {
        self.details.get(key).and_then(Json::as_f64)
    }
}

pub fn parse_rows(text: &str) -> CliResult<Vec<ReportRow>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let field = format!("line {}", i + 1);
            let v: Json = serde_json::from_str(line).map_err(|e| CliError::malformed(&field, e.to_string()))?;
            let text = |k: &str| {
                v.get(k)
                    .and_then(Json::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| CliError::malformed(&field, format!("missing `{k}`")))
            };
            let object = |k: &str| v.get(k).and_then(Json::as_object).cloned().unwrap_or_default();
            Ok(ReportRow {
                check_id: text("check_id")?,
                verdict: text("verdict")?,
                implied_constant: v.get("implied_constant").and_then(Json::as_f64),
                params: object("params"),
                details: object("details"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use sumprod_core::harness::{run_check, CheckId, CheckSpec, HarnessConfig};

    #[test]
    fn params_round_trip_through_json() {
        let text = r#"{"p": 7, "A": [1, 2, 4], "Bs": [[0, 1]], "B": ["1/2", 3], "points": [[0, 0, 1]], "delta": "1/3", "phi": "cube"}"#;
        let params = params_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(params.int("p").unwrap(), 7);
        assert_eq!(params.set("A").unwrap().len(), 3);
        assert_eq!(params.sets("Bs").unwrap().len(), 1);
        assert_eq!(params.rational_set("B").unwrap().len(), 2);
        assert_eq!(params.points("points").unwrap(), &[[0, 0, 1]]);
        assert_eq!(params.text("phi").unwrap(), "cube");
        let back = map_of(params.iter());
        assert_eq!(params_from_json(&back).unwrap(), params);
    }

    #[test]
    fn report_lines_parse_back() {
        let params = params_from_json(&json!({"p": 7, "A": [1, 2, 4], "P": [1, 3], "k": 2})).unwrap();
        let r = run_check(&CheckSpec::new(CheckId::EpIneq, params), &HarnessConfig::default()).unwrap();
        let line = report_line(&r);
        assert!(line.starts_with(r#"{"schema":1,"check_id":"EP_INEQ""#));
        assert!(!line.contains("implied_constant"));
        let rows = parse_rows(&line).unwrap();
        assert_eq!(rows[0].verdict, "pass");
        assert_eq!(rows[0].param_len("A"), Some(3));
    }
}
