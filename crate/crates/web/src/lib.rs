//! Browser bindings. Every export takes plain strings and returns a JSON
//! string; failures come back as `{"error": "..."}` rather than exceptions.

use serde_json::{json, Value};
use vcbent::bentlab::{self, circular_spectrum, spectrum_is_bent};
use vcbent::generator::{exps_string, generate_class, seed};
use vcbent::{MvFunction, PermExpr, Radix, Route, Spectrum};
use wasm_bindgen::prelude::*;

fn function(p: u32, digits: &str) -> vcbent::Result<MvFunction> {
    let radix = Radix::new(p)?;
    let clean: String = digits.chars().filter(|c| !c.is_whitespace()).collect();
    MvFunction::from_digits(radix, &clean)
}

fn pretty_all(v: &[vcbent::CycInt]) -> Vec<String> {
    v.iter().map(|c| c.pretty()).collect()
}

fn or_error(r: vcbent::Result<Value>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

pub fn analyze(p: u32, digits: &str) -> vcbent::Result<Value> {
    let f = function(p, digits)?;
    vcbent::Limits::default().check_dense(f.len())?;
    let s = circular_spectrum(&f)?;
    let verdict = bentlab::verdict_for(&s);
    Ok(json!({
        "p": p,
        "n": f.vars(),
        "spectrum": pretty_all(s.entries()),
        "strict_exponents": bentlab::strict_exponents(&s).ok().map(|t| exps_string(&t)),
        "verdict": verdict,
    }))
}

pub fn permute(expr: &str, digits: &str) -> vcbent::Result<Value> {
    let f = function(3, digits)?;
    let e = PermExpr::parse(expr)?;
    let p = e.eval(Radix::THREE)?;
    let s = circular_spectrum(&f)?;
    let permuted = Spectrum::new(Radix::THREE, p.apply(s.entries())?)?;
    let outcome = match spectrum_is_bent(&permuted) {
        Ok(g) => json!({ "g": g.digits() }),
        Err(e) => json!({ "stage": e.stage.to_string(), "index": e.index, "value": e.value.pretty() }),
    };
    let w = if p.size() <= 9 { Some(e.conjugate(Radix::THREE, Route::Table)?) } else { None };
    let w = w.map(|w| {
        let m = w.to_matrix();
        json!({
            "denominator": m.denominator(),
            "rows": (0..m.size()).map(|i| pretty_all(m.numerator().row(i))).collect::<Vec<_>>(),
            "generalized_permutation": m.is_generalized_permutation(),
        })
    });
    Ok(json!({
        "expr": e.to_string(),
        "spectrum": pretty_all(permuted.entries()),
        "flat": vcbent::vctransform::is_flat(&permuted),
        "outcome": outcome,
        "w": w,
    }))
}

pub fn class_table(class: u8) -> vcbent::Result<Value> {
    let record = generate_class(class, &seed(class)?)?;
    Ok(serde_json::to_value(&record).expect("records serialize"))
}

/// Spectrum and verdict for a value vector, e.g. `("3", "000012021")`.
#[wasm_bindgen]
pub fn spectrum_json(p: u32, digits: &str) -> String {
    or_error(analyze(p, digits))
}

/// Permutes the spectrum of a 2-place ternary function and tries to recover g.
#[wasm_bindgen]
pub fn permute_json(expr: &str, digits: &str) -> String {
    or_error(permute(expr, digits))
}

/// The 18 primitives of class 1..9.
#[wasm_bindgen]
pub fn class_json(class: u8) -> String {
    or_error(class_table(class))
}
