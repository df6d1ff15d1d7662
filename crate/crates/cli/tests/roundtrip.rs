use residue_core::parse::{parse_form, parse_laurent, parse_rational_function, Context};
use residue_core::scalar::{ExtensionField, Field};
use residue_core::upoly::UPoly;

const LAURENT: &[&str] = &[
    "t",
    "-t",
    "t^-1",
    "3/2*t^-2 + 5",
    "1 - t + t^2 - t^3",
    "(1 + t)^3",
    "(t - 1)*(t + 1)",
    "t^-3 - 2/7*t^4",
    "0",
    "12",
    "-4/6*t^2",
    "t1*t2",
    "t1^-1*t2^-1",
    "3/2*t1^-2*t2^3 + 7",
    "t1 - t2",
    "(t1 + t2)^2",
    "t1^3 + t1^2 - t2^2",
    "-t1^-2 + 1/3*t2^5 - t1*t2",
    "2*t1*t1*t2^-1",
    "t1 + t2 + t3",
    "t3^-1*t1^2 - 9",
];

const FORMS: &[&str] = &[
    "t^-1 d(t)",
    "d(t)",
    "t^3 d(t^-2 + t)",
    "(1 + t) * d(t^2)",
    "-5/3*t^-4 d(t)",
    "t1^-1*t2^-1 d(t1) ^ d(t2)",
    "d(t1) ^ d(t2)",
    "t2 d(t1*t2) ^ d(t2^-1)",
    "(t1 - t2) d(t1 + t2) ^ d(t1 - t2)",
    "t1^-2*t2 d(t1^2) ^ d(t2^3 + t1)",
    "-t1 d(t2) ^ d(t1)",
    "1/2 d(t1^-1) ^ d(t2^-1)",
];

const RATIONAL: &[&str] = &[
    "1/t",
    "1/(t^2+1)",
    "(t-1)/t^3",
    "(t^3+2)/((t-1)*(t^2+1))",
    "t^2",
    "3/(2*t - 4)",
    "(t^2 - 1)/(t - 1)",
    "1/((t^2+t+1)*(t+3))",
    "(t^4 + t)/(t^2 - 2)",
    "-7/(t^2 + 3)^2",
    "(t^3 - 3*t)/(t^4 + 4)",
    "5",
    "t^-2/(t + 1)",
];

const EXTENSION: &[&str] = &[
    "(1 + x)*t^-1",
    "x*t^2 - (3 - x)",
    "(x)^2*t + (2*x)*t^-1",
    "-(x + 1/2)*t",
    "x",
    "(1 - x)^3*t^-4",
    "t + x*t^2 + (x^-1)*t^3",
];

fn reparses<T: PartialEq + std::fmt::Debug + std::fmt::Display>(text: &str, parse: impl Fn(&str) -> T) {
    let first = parse(text);
    let rendered = first.to_string();
    let second = parse(&rendered);
    assert_eq!(first, second, "{text:?} rendered as {rendered:?}");
}

#[test]
fn corpus_has_fifty_expressions() {
    assert!(LAURENT.len() + FORMS.len() + RATIONAL.len() + EXTENSION.len() >= 50);
}

#[test]
fn laurent_polynomials_round_trip() {
    for text in LAURENT {
        reparses(text, |s| parse_laurent(s, &Context::default()).unwrap());
    }
}

#[test]
fn differential_forms_round_trip() {
    for text in FORMS {
        reparses(text, |s| parse_form(s, &Context::default()).unwrap());
    }
}

#[test]
fn rational_functions_round_trip() {
    for text in RATIONAL {
        reparses(text, |s| parse_rational_function(s).unwrap());
    }
}

#[test]
fn extension_coefficients_round_trip() {
    let ext = ExtensionField::new(UPoly::from_i64(&[1, 0, 1]), "x").unwrap();
    let ctx = Context::new(Some(1), Field::Extension(ext));
    for text in EXTENSION {
        reparses(text, |s| parse_laurent(s, &ctx).unwrap());
    }
}
