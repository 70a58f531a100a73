//! Browser bindings for three small computations: the connection curve of
//! the counter graph, an FKG gap on the theta graph, and the table of even
//! subgraphs of the counter graph. Each returns a JSON string.
//!
//! The `*_json` functions are plain Rust so they can be tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use std::sync::Arc;

use graphrep::arith::{parse_rational, to_f64, to_fraction, to_scientific, Rational};
use graphrep::checkers::fkg_pair_gap;
use graphrep::events::Event;
use graphrep::graph::{generalized_theta, theta_segments};
use graphrep::measures::{CurrentParams, Model};
use graphrep::report::{figure, FigureModel, FigureValue};
use graphrep::theta::counter_subgraph_table;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest grid the page will compute in one call.
pub const MAX_STEPS: u32 = 1024;
const DIGITS: usize = 20;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn grid(steps: u32) -> Result<Vec<Rational>, String> {
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must lie in 2..={MAX_STEPS}"));
    }
    Ok((1..steps)
        .map(|k| Rational::new(k.into(), steps.into()))
        .collect())
}

/// `P(a <-> b)` on the counter graph at `k/steps`, with the first certified
/// decrease between neighbouring points.
pub fn connection_curve_json(model: &str, n: u32, m: u32, steps: u32) -> Result<String, String> {
    let model: FigureModel = model.parse().map_err(err)?;
    let data = figure(model, n, m, &grid(steps)?, DIGITS).map_err(err)?;
    let points: Vec<Value> = data
        .rows
        .iter()
        .map(|r| {
            let (value, exact) = match &r.value {
                FigureValue::Exact(v) => (to_f64(v), Some(to_fraction(v))),
                FigureValue::Enclosed(i) => (to_f64(&i.midpoint()), None),
            };
            json!({ "x": to_f64(&r.x), "value": value, "exact": exact })
        })
        .collect();
    let mut out = json!({ "model": model.tag(), "n": n, "m": m, "points": points });
    out["decrease"] = data.sidecar()["certified_decrease"].clone();
    Ok(out.to_string())
}

/// `P(A ∩ B) - P(A) P(B)` on `theta[n, m, n]` for `A` = outer plus middle
/// path open and `B` = middle plus other outer path open.
pub fn theta_fkg_gap_json(model: &str, n: u32, m: u32, x: &str) -> Result<String, String> {
    let model = Model::parse(model).map_err(err)?;
    let x = parse_rational(x).map_err(err)?;
    if x <= Rational::from_integer(0.into()) || x >= Rational::from_integer(1.into()) {
        return Err("x must lie strictly between 0 and 1".into());
    }
    if model == Model::SingleCurrent {
        CurrentParams::from_x(x.clone())
            .single_current_p()
            .map_err(err)?;
    }
    let lengths = [n, m, n];
    let g = Arc::new(generalized_theta(&lengths, None).map_err(err)?);
    let s = theta_segments(&lengths);
    let a = Event::all_open(s[0] | s[1]);
    let b = Event::all_open(s[1] | s[2]);
    let d = model
        .build(&g, &CurrentParams::from_x(x.clone()))
        .map_err(err)?;
    let gap = fkg_pair_gap(&d, &a, &b).map_err(err)?;
    Ok(json!({
        "model": model.tag(),
        "x": to_fraction(&x),
        "gap": to_fraction(&gap),
        "gap_decimal": to_scientific(&gap, DIGITS),
        "negative": gap < Rational::from_integer(0.into()),
    })
    .to_string())
}

/// The eight even subgraphs of the counter graph with edge counts, loop
/// weights at `x` and whether they connect the marks.
pub fn even_subgraph_table_json(n: u32, m: u32, x: &str) -> Result<String, String> {
    let x = parse_rational(x).map_err(err)?;
    let rows = counter_subgraph_table(n, m).map_err(err)?;
    let total: Rational = rows.iter().map(|r| pow(&x, r.edges)).sum();
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let w = pow(&x, r.edges);
            json!({
                "label": r.label,
                "edges": r.edges,
                "weight": format!("x^{}", r.edges),
                "probability": to_fraction(&(&w / &total)),
                "connected": r.connected,
            })
        })
        .collect();
    Ok(json!({ "n": n, "m": m, "x": to_fraction(&x), "rows": rows }).to_string())
}

fn pow(x: &Rational, k: usize) -> Rational {
    graphrep::arith::pow(x, k as u64)
}

#[wasm_bindgen]
pub fn connection_curve(model: &str, n: u32, m: u32, steps: u32) -> Result<String, JsValue> {
    connection_curve_json(model, n, m, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn theta_fkg_gap(model: &str, n: u32, m: u32, x: &str) -> Result<String, JsValue> {
    theta_fkg_gap_json(model, n, m, x).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn even_subgraph_table(n: u32, m: u32, x: &str) -> Result<String, JsValue> {
    even_subgraph_table_json(n, m, x).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_bounds() {
        assert!(grid(1).is_err());
        assert!(grid(MAX_STEPS + 1).is_err());
        assert_eq!(grid(4).unwrap().len(), 3);
    }

    #[test]
    fn table_probabilities_sum_to_one() {
        let v: Value =
            serde_json::from_str(&even_subgraph_table_json(2, 2, "1/2").unwrap()).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 8);
        let sum: Rational = rows
            .iter()
            .map(|r| parse_rational(r["probability"].as_str().unwrap()).unwrap())
            .sum();
        assert_eq!(sum, Rational::from_integer(1.into()));
    }
}
