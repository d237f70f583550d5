//! JSON encodings of tensors, rational functions and normal forms.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::curve::{ClassLetter, Curve, FormLetter, RationalFunction};
use crate::error::{ParseError, Result};
use crate::reduce::NormalForm;
use crate::scalar::Scalar;
use crate::shuffle::{ShuffleTensor, Word};

fn bad(msg: impl Into<String>) -> crate::error::Error {
    ParseError::Json(msg.into()).into()
}

pub fn complex(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub fn complex_matrix(m: &[Vec<Complex64>]) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(|&c| complex(c)).collect())).collect())
}

fn scalar_json(c: &Scalar) -> Value {
    json!({"re": c.re_string(), "im": c.im_string()})
}

fn scalar_from(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(s.parse()?),
        Value::Number(n) => Ok(n.to_string().parse()?),
        Value::Object(o) => {
            let part = |k: &str| match o.get(k) {
                None => Ok("0".to_string()),
                Some(Value::String(s)) => Ok(s.clone()),
                Some(Value::Number(n)) => Ok(n.to_string()),
                Some(other) => Err(bad(format!("bad scalar part {other}"))),
            };
            Ok(Scalar::from_parts_str(&part("re")?, &part("im")?)?)
        }
        other => Err(bad(format!("bad scalar {other}"))),
    }
}

fn label_from(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(bad(format!("bad pole label {other}"))),
    }
}

fn terms_of(v: &Value) -> Result<&Vec<Value>> {
    v.get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("expected an object with a \"terms\" array"))
}

fn term_parts(t: &Value) -> Result<(&Vec<Value>, Scalar)> {
    let word = t.get("word").and_then(Value::as_array).ok_or_else(|| bad("term without \"word\""))?;
    let coeff = match t.get("coeff") {
        Some(c) => scalar_from(c)?,
        None => Scalar::from_int(1),
    };
    Ok((word, coeff))
}

pub fn form_letter_json(curve: &Curve, l: FormLetter) -> Value {
    match l {
        FormLetter::Pole { pole, order: 1 } => json!({"pole": curve.label(pole)}),
        FormLetter::Pole { pole, order } => json!({"pole": curve.label(pole), "order": order}),
        FormLetter::Monomial(k) => json!({"monomial": k}),
    }
}

pub fn form_letter_from(curve: &Curve, v: &Value) -> Result<FormLetter> {
    if let Some(k) = v.get("monomial") {
        let k = k.as_u64().ok_or_else(|| bad("monomial degree must be a nonnegative integer"))?;
        return Ok(FormLetter::Monomial(k as u32));
    }
    let p = v.get("pole").ok_or_else(|| bad(format!("not a form letter: {v}")))?;
    let pole = curve.index_of_label(&label_from(p)?)?;
    let order = match v.get("order") {
        None => 1,
        Some(o) => o
            .as_u64()
            .filter(|&o| o >= 1)
            .ok_or_else(|| bad("pole order must be a positive integer"))? as u32,
    };
    Ok(FormLetter::Pole { pole, order })
}

pub fn class_letter_json(curve: &Curve, l: ClassLetter) -> Value {
    json!({"class": curve.label(l.0)})
}

pub fn class_letter_from(curve: &Curve, v: &Value) -> Result<ClassLetter> {
    let p = v.get("class").ok_or_else(|| bad(format!("not a class letter: {v}")))?;
    Ok(ClassLetter(curve.index_of_label(&label_from(p)?)?))
}

fn tensor_json<L: crate::shuffle::Letter>(t: &ShuffleTensor<L>, letter: impl Fn(&L) -> Value) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .map(|(w, c)| json!({"word": w.letters().iter().map(&letter).collect::<Vec<_>>(), "coeff": scalar_json(c)}))
        .collect();
    json!({ "terms": terms })
}

pub fn form_tensor_json(curve: &Curve, t: &ShuffleTensor<FormLetter>) -> Value {
    tensor_json(t, |&l| form_letter_json(curve, l))
}

pub fn class_tensor_json(curve: &Curve, t: &ShuffleTensor<ClassLetter>) -> Value {
    tensor_json(t, |&l| class_letter_json(curve, l))
}

pub fn form_tensor_from(curve: &Curve, v: &Value) -> Result<ShuffleTensor<FormLetter>> {
    let mut out = ShuffleTensor::zero(curve.form_alphabet());
    for t in terms_of(v)? {
        let (word, c) = term_parts(t)?;
        let w = word.iter().map(|l| form_letter_from(curve, l)).collect::<Result<Vec<_>>>()?;
        out.add_term(Word(w), c);
    }
    Ok(out)
}

pub fn class_tensor_from(curve: &Curve, v: &Value) -> Result<ShuffleTensor<ClassLetter>> {
    let mut out = ShuffleTensor::zero(curve.class_alphabet());
    for t in terms_of(v)? {
        let (word, c) = term_parts(t)?;
        let w = word.iter().map(|l| class_letter_from(curve, l)).collect::<Result<Vec<_>>>()?;
        out.add_term(Word(w), c);
    }
    Ok(out)
}

fn rf_body(f: &RationalFunction) -> Value {
    let curve = f.curve();
    let poly: Vec<String> = f.poly().iter().map(|c| c.to_string()).collect();
    let principal: Vec<Value> = f
        .principal()
        .iter()
        .map(|(&(s, k), c)| json!({"pole": curve.label(s), "order": k, "coeff": c.to_string()}))
        .collect();
    json!({"poly": poly, "principal": principal})
}

fn poles_json(curve: &Curve) -> Value {
    Value::Array((0..curve.len()).map(|i| Value::String(curve.label(i))).collect())
}

pub fn rf_json(f: &RationalFunction) -> Value {
    json!({"poles": poles_json(f.curve()), "rf": rf_body(f)})
}

fn rf_body_from(curve: &Curve, v: &Value) -> Result<RationalFunction> {
    let poly = match v.get("poly") {
        None => Vec::new(),
        Some(p) => p
            .as_array()
            .ok_or_else(|| bad("\"poly\" must be an array"))?
            .iter()
            .map(scalar_from)
            .collect::<Result<Vec<_>>>()?,
    };
    let mut principal = Vec::new();
    if let Some(p) = v.get("principal") {
        for term in p.as_array().ok_or_else(|| bad("\"principal\" must be an array"))? {
            let pole = curve.index_of_label(&label_from(term.get("pole").ok_or_else(|| bad("term without pole"))?)?)?;
            let order = term
                .get("order")
                .and_then(Value::as_u64)
                .filter(|&o| o >= 1)
                .ok_or_else(|| bad("pole order must be a positive integer"))? as u32;
            let coeff = scalar_from(term.get("coeff").ok_or_else(|| bad("term without coeff"))?)?;
            principal.push(((pole, order), coeff));
        }
    }
    RationalFunction::from_parts(curve, poly, principal)
}

/// Reads `{"poles": [...], "rf": {...}}`; without `"poles"` the given curve is used.
pub fn rf_from(curve: Option<&Curve>, v: &Value) -> Result<RationalFunction> {
    let curve = match (v.get("poles"), curve) {
        (Some(p), _) => {
            let labels = p.as_array().ok_or_else(|| bad("\"poles\" must be an array"))?;
            let pts = labels
                .iter()
                .map(|l| Ok(label_from(l)?.parse::<Scalar>()?))
                .collect::<Result<Vec<_>>>()?;
            let c = Curve::new(pts)?;
            match curve {
                Some(given) if given.points() == c.points() => given.clone(),
                Some(_) => return Err(crate::error::Error::PoleSetMismatch),
                None => c,
            }
        }
        (None, Some(c)) => c.clone(),
        (None, None) => return Err(bad("missing \"poles\"")),
    };
    rf_body_from(&curve, v.get("rf").unwrap_or(v))
}

pub fn normal_form_json(nf: &NormalForm) -> Value {
    let curve = nf.section.curve();
    let terms: Vec<Value> = nf
        .tensor
        .terms()
        .iter()
        .map(|(w, f)| {
            json!({
                "word": w.letters().iter().map(|&l| class_letter_json(curve, l)).collect::<Vec<_>>(),
                "f": rf_body(f),
            })
        })
        .collect();
    let mut out = Map::new();
    out.insert("poles".into(), poles_json(curve));
    out.insert("x0".into(), Value::String(nf.x0.to_string()));
    if !nf.section.is_standard() {
        out.insert(
            "section".into(),
            Value::Array(nf.section.corrections().iter().map(rf_body).collect()),
        );
    }
    out.insert("terms".into(), Value::Array(terms));
    Value::Object(out)
}

/// Parses a comma-separated list of pole labels into a class word.
pub fn class_word_from_labels(curve: &Curve, list: &str) -> Result<Word<ClassLetter>> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(Word::empty());
    }
    Ok(Word(
        list.split(',')
            .map(|l| curve.index_of_label(l.trim()).map(ClassLetter))
            .collect::<Result<Vec<_>>>()?,
    ))
}

pub fn class_word_labels(curve: &Curve, w: &Word<ClassLetter>) -> Vec<String> {
    w.letters().iter().map(|l| curve.label(l.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_round_trip() {
        let c = Curve::parse("0,1,1/2+i").unwrap();
        let text = r#"{"terms":[{"word":[{"pole":"0"},{"pole":"1/2+i","order":3},{"monomial":2}],"coeff":{"re":"1/3","im":"-2"}},
                       {"word":[],"coeff":"5"}]}"#;
        let v: Value = serde_json::from_str(text).unwrap();
        let t = form_tensor_from(&c, &v).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.counit(), Scalar::from_int(5));
        let back = form_tensor_from(&c, &form_tensor_json(&c, &t)).unwrap();
        assert_eq!(back, t);
        let bad: Value = serde_json::from_str(r#"{"terms":[{"word":[{"pole":"7"}]}]}"#).unwrap();
        assert!(matches!(
            form_tensor_from(&c, &bad),
            Err(crate::error::Error::Parse(ParseError::UnknownLabel(_)))
        ));
    }

    #[test]
    fn rf_round_trip() {
        let text = r#"{"poles":["0","1","1/2+i"], "rf":{"poly":["c0","c1"],"principal":[{"pole":"0","order":2,"coeff":"-1"}]}}"#;
        let v: Value = serde_json::from_str(text).unwrap();
        assert!(rf_from(None, &v).is_err());
        let text = text.replace("\"c0\",\"c1\"", "\"2\",\"1/2-i\"");
        let v: Value = serde_json::from_str(&text).unwrap();
        let f = rf_from(None, &v).unwrap();
        assert_eq!(f.term_count(), 3);
        assert_eq!(rf_from(Some(f.curve()), &rf_json(&f)).unwrap(), f);
    }

    #[test]
    fn class_words() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let w = class_word_from_labels(&c, "1,0").unwrap();
        assert_eq!(w, Word(vec![ClassLetter(1), ClassLetter(0)]));
        assert_eq!(class_word_labels(&c, &w), vec!["1", "0"]);
        assert!(class_word_from_labels(&c, "2").is_err());
    }
}
