//! Validated commands and their execution.
//!
//! A [`Command`] is built either from the command line or from one line of a
//! JSON-lines batch file (tagged by `"op"`), and [`run`] turns it into a JSON
//! value. Library errors come back as `Err(message)`.

use serde::Deserialize;
use serde_json::{json, Value};

use residue_core::homology::CubicalStructure;
use residue_core::laurent::TruncatedSeries;
use residue_core::operator::WindowedOperator;
use residue_core::parse::{parse_form, parse_rational_function, parse_scalar, parse_univariate, Context};
use residue_core::residue::{expand_at_place, global_residue_sum, nodal_factorization_check, residue_form, Place};
use residue_core::scalar::{ExtensionField, Field};
use residue_core::verify::{run_suite, Suite};

pub const DEFAULT_CASES: usize = 50;
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Res { form: String, n: Option<usize>, ext: Option<String> },
    Trace { operator: Value, n: Option<usize>, ext: Option<String> },
    Expand { rf: String, place: String, order: i64 },
    GlobalSum { rf: String },
    Verify { suite: String, cases: Option<usize>, seed: Option<u64> },
    Nodal { order: i64 },
}

/// The JSON produced by a command, and whether the check it performed held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    fn holds(value: Value) -> Self {
        Self { value, ok: true }
    }
}

type CmdResult<T> = Result<T, String>;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// `Q[s]/(p)` for a modulus such as `x^2+1`; the generator is the single
/// letter used in the text. The modulus must be irreducible over Q.
pub fn parse_extension(text: &str) -> CmdResult<Field> {
    let symbol = text
        .split(|c: char| !c.is_ascii_alphanumeric())
        .find_map(|w| w.chars().next().filter(char::is_ascii_alphabetic).map(|_| w))
        .unwrap_or("x");
    if symbol == "t" || symbol == "d" || symbol.starts_with('t') && symbol[1..].bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("extension generator '{symbol}' clashes with the variables t, t1, t2, ... or d"));
    }
    let modulus = parse_univariate(text, symbol).map_err(err)?;
    Place::finite(&modulus).map_err(|e| format!("extension modulus: {e}"))?;
    let ext = ExtensionField::new(modulus, symbol).map_err(err)?;
    Ok(Field::Extension(ext))
}

fn field_of(ext: &Option<String>) -> CmdResult<Field> {
    ext.as_deref().map_or(Ok(Field::Rational), parse_extension)
}

fn parse_place(text: &str) -> CmdResult<Place> {
    match text.trim() {
        "inf" | "infinity" | "oo" => Ok(Place::Infinity),
        t => Place::finite(&parse_univariate(t, "t").map_err(err)?).map_err(err),
    }
}

fn local_parameter(place: &Place) -> String {
    match place {
        Place::Infinity => "1/t".into(),
        Place::Finite(p) if p.degree() == Some(1) => p.render("t"),
        Place::Finite(_) => "t - x".into(),
    }
}

fn render_series(s: &TruncatedSeries, var: &str) -> String {
    let mut out = String::new();
    for (e, c) in s.terms() {
        let text = c.render();
        let compound = text[1..].contains(['+', '-']);
        let (neg, mag) = match text.strip_prefix('-') {
            Some(rest) if !compound => (true, rest.to_string()),
            _ => (false, text),
        };
        out.push_str(match (out.is_empty(), neg) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        });
        let mono = match e.0[0] {
            0 => String::new(),
            1 => var.to_string(),
            k => format!("{var}^{k}"),
        };
        match (mag.as_str(), mono.is_empty()) {
            (_, true) if compound => out.push_str(&format!("({mag})")),
            (_, true) => out.push_str(&mag),
            ("1", false) => out.push_str(&mono),
            (_, false) if compound => out.push_str(&format!("({mag})*{mono}")),
            (_, false) => out.push_str(&format!("{mag}*{mono}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("{out} + O({var}^{})", s.order())
}

fn check_dim(n: usize) -> CmdResult<usize> {
    if (1..=4).contains(&n) {
        Ok(n)
    } else {
        Err(format!("--n must be between 1 and 4, got {n}"))
    }
}

/// Executes one command.
pub fn run(cmd: &Command) -> CmdResult<Outcome> {
    match cmd {
        Command::Res { form, n, ext } => {
            let field = field_of(ext)?;
            let n = n.map(check_dim).transpose()?;
            let form = parse_form(form, &Context::new(n, field)).map_err(err)?;
            let value = residue_form(&form, &CubicalStructure::new(form.dim())).map_err(err)?;
            Ok(Outcome::holds(json!({ "value": value.to_string() })))
        }
        Command::Trace { operator, n, ext } => {
            let field = field_of(ext)?;
            let inferred = operator
                .as_array()
                .and_then(|a| a.first())
                .and_then(|t| t.get("shift"))
                .and_then(Value::as_array)
                .map(Vec::len);
            let dim = check_dim(n.or(inferred).ok_or("cannot infer the dimension of an empty operator; pass --n")?)?;
            let parse = |s: &str| parse_scalar(s, &field);
            let op = WindowedOperator::from_json(dim, field.clone(), operator, parse).map_err(err)?;
            let value = op.tate_trace().map_err(err)?;
            Ok(Outcome::holds(json!({ "value": value.render() })))
        }
        Command::Expand { rf, place, order } => {
            let r = parse_rational_function(rf).map_err(err)?;
            let place = parse_place(place)?;
            let (field, series) = expand_at_place(&r, &place, *order).map_err(err)?;
            let coefficients: Vec<Value> =
                series.terms().map(|(e, c)| json!({ "exponent": e.0[0], "coeff": c.render() })).collect();
            Ok(Outcome::holds(json!({
                "place": place.to_string(),
                "degree": place.degree(),
                "field": field.to_string(),
                "parameter": local_parameter(&place),
                "order": series.order(),
                "series": render_series(&series, "u"),
                "coefficients": coefficients,
            })))
        }
        Command::GlobalSum { rf } => {
            let r = parse_rational_function(rf).map_err(err)?;
            let (sum, places) = global_residue_sum(&r).map_err(err)?;
            let places: Vec<Value> = places
                .iter()
                .map(|(p, v)| json!({ "place": p.to_string(), "degree": p.degree(), "residue": v.to_string() }))
                .collect();
            Ok(Outcome::holds(json!({ "sum": sum.to_string(), "places": places })))
        }
        Command::Verify { suite, cases, seed } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, cases.unwrap_or(DEFAULT_CASES), seed.unwrap_or(DEFAULT_SEED));
            Ok(Outcome {
                ok: report.passed(),
                value: json!({ "suite": report.suite, "cases": report.cases, "failures": report.failures }),
            })
        }
        Command::Nodal { order } => {
            if !(1..=64).contains(order) {
                return Err(format!("--order must be between 1 and 64, got {order}"));
            }
            let ok = nodal_factorization_check(*order);
            Ok(Outcome { value: json!({ "ok": ok }), ok })
        }
    }
}

/// Runs one batch line: the input object echoed back with `"result"` (and
/// `"per_place"` for global sums), or with `"error"`.
pub fn run_batch_line(line: &str) -> (Value, bool) {
    let input: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return (json!({ "input": line, "error": format!("invalid JSON: {e}") }), false),
    };
    let mut out = match &input {
        Value::Object(m) => m.clone(),
        _ => return (json!({ "input": input, "error": "each line must be a JSON object" }), false),
    };
    let outcome = serde_json::from_value::<Command>(input).map_err(err).and_then(|c| run(&c));
    match outcome {
        Ok(Outcome { value, ok }) => {
            match value {
                Value::Object(mut v) if v.contains_key("sum") => {
                    out.insert("result".into(), v.remove("sum").unwrap_or(Value::Null));
                    out.insert("per_place".into(), v.remove("places").unwrap_or(Value::Null));
                }
                Value::Object(v) if v.len() == 1 && (v.contains_key("value") || v.contains_key("ok")) => {
                    let inner = v.into_iter().next().map(|(_, x)| x);
                    out.insert("result".into(), inner.unwrap_or(Value::Null));
                }
                other => {
                    out.insert("result".into(), other);
                }
            }
            (Value::Object(out), ok)
        }
        Err(e) => {
            out.insert("error".into(), Value::String(e));
            (Value::Object(out), false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(form: &str, n: usize) -> Command {
        Command::Res { form: form.into(), n: Some(n), ext: None }
    }

    #[test]
    fn residue_of_dt_over_t() {
        let out = run(&res("t^-1 d(t)", 1)).unwrap();
        assert_eq!(out.value, json!({"value": "1"}));
    }

    #[test]
    fn extension_residues_are_traces() {
        let cmd = Command::Res { form: "t^-1 d(t)".into(), n: Some(1), ext: Some("x^2+1".into()) };
        assert_eq!(run(&cmd).unwrap().value["value"], "2");
        let cmd = Command::Res { form: "x*t^-1 d(t)".into(), n: Some(1), ext: Some("x^2+1".into()) };
        assert_eq!(run(&cmd).unwrap().value["value"], "0");
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        assert!(parse_extension("x^2-1").is_err());
        assert!(parse_extension("t^2+1").is_err());
        assert!(parse_extension("y^2-2").is_ok());
    }

    #[test]
    fn wrong_dimension_is_an_error() {
        assert!(run(&res("t1^-1*t2^-1 d(t1) ^ d(t2)", 1)).is_err());
        assert_eq!(run(&res("t1^-1*t2^-1 d(t1) ^ d(t2)", 2)).unwrap().value["value"], "1");
    }

    #[test]
    fn trace_of_finite_rank_and_shift() {
        let op = json!([{ "coeff": "2", "shift": [0], "window": [[0, 3]] }]);
        let out = run(&Command::Trace { operator: op, n: None, ext: None }).unwrap();
        assert_eq!(out.value["value"], "6");
        let shift = json!([{ "coeff": "1", "shift": [1], "window": [[0, 5]] }]);
        assert_eq!(run(&Command::Trace { operator: shift, n: None, ext: None }).unwrap().value["value"], "0");
        let full = json!([{ "coeff": "1", "shift": [0], "window": [["-inf", "inf"]] }]);
        assert!(run(&Command::Trace { operator: full, n: None, ext: None }).is_err());
    }

    #[test]
    fn expansion_at_a_quadratic_place() {
        let cmd = Command::Expand { rf: "1/(t^2+1)".into(), place: "t^2+1".into(), order: 1 };
        let out = run(&cmd).unwrap().value;
        assert_eq!(out["degree"], 2);
        assert_eq!(out["parameter"], "t - x");
        assert_eq!(out["coefficients"][0]["exponent"], -1);
    }

    #[test]
    fn global_sum_vanishes() {
        let out = run(&Command::GlobalSum { rf: "(t^3+2)/((t-1)*(t^2+1))".into() }).unwrap().value;
        assert_eq!(out["sum"], "0");
        assert_eq!(out["places"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn batch_lines_mirror_their_input() {
        let (v, ok) = run_batch_line(r#"{"op":"res","n":1,"form":"t^-1 d(t)"}"#);
        assert!(ok);
        assert_eq!(v, json!({"op":"res","n":1,"form":"t^-1 d(t)","result":"1"}));
        let (v, ok) = run_batch_line(r#"{"op":"global-sum","rf":"1/t"}"#);
        assert!(ok);
        assert_eq!(v["result"], "0");
        assert_eq!(v["per_place"][0]["residue"], "1");
        let (v, ok) = run_batch_line(r#"{"op":"res","form":"t","bogus":1}"#);
        assert!(!ok);
        assert!(v["error"].as_str().unwrap().contains("bogus"));
        let (v, ok) = run_batch_line("not json");
        assert!(!ok && v.get("error").is_some());
    }
}
