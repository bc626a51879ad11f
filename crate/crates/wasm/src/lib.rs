//! Browser bindings: evaluate an expression, list its congruences and draw
//! both Hasse diagrams, and show small censuses.
//!
//! Every export returns a JSON string. The plain functions behind them are
//! ordinary Rust and are tested natively.

use conlat::census::census;
use conlat::congruence::congruence_lattice_with_elements;
use conlat::{build, Lattice};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest census the page offers; larger ones take too long in a browser tab.
pub const MAX_CENSUS_N: usize = 7;

/// A Hasse diagram with drawing coordinates in the unit square, bottom at
/// `y = 0`.
#[derive(Debug, Serialize)]
pub struct Diagram {
    pub n: usize,
    pub labels: Vec<String>,
    pub covers: Vec<[usize; 2]>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Elements go on the row of their height, spread evenly in index order.
pub fn layout(l: &Lattice, labels: Vec<String>) -> Diagram {
    let heights = l.heights();
    let top = heights.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); heights.iter().copied().max().unwrap_or(0) + 1];
    for x in l.elements() {
        rows[heights[x]].push(x);
    }
    let mut xs = vec![0.5; l.len()];
    for row in &rows {
        for (i, &e) in row.iter().enumerate() {
            xs[e] = (i as f64 + 1.0) / (row.len() as f64 + 1.0);
        }
    }
    Diagram {
        n: l.len(),
        labels,
        covers: l.covers().iter().map(|&(a, b)| [a, b]).collect(),
        x: xs,
        y: heights.iter().map(|&h| h as f64 / top).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct Evaluation {
    pub format: u32,
    pub expr: String,
    pub lattice: Diagram,
    pub congruence_count: usize,
    pub filters: usize,
    pub ideals: usize,
    /// Each congruence as blocks of element names, in the order of `con_lattice`.
    pub congruences: Vec<String>,
    pub con_lattice: Diagram,
}

pub fn evaluate(expr: &str) -> Result<Evaluation, String> {
    let l = build(expr).map_err(|e| e.to_string())?;
    let (con, elements) = congruence_lattice_with_elements(&l);
    let congruences: Vec<String> = elements.iter().map(|c| c.display_with(&l)).collect();
    let con_labels = (0..con.len()).map(|i| format!("θ{i}")).collect();
    Ok(Evaluation {
        format: 1,
        expr: expr.trim().to_string(),
        lattice: layout(&l, l.names().to_vec()),
        congruence_count: elements.len(),
        filters: l.filters().len(),
        ideals: l.ideals().len(),
        congruences,
        con_lattice: layout(&con, con_labels),
    })
}

pub fn census_report(n: usize) -> Result<String, String> {
    if n == 0 || n > MAX_CENSUS_N {
        return Err(format!("choose n between 1 and {MAX_CENSUS_N}"));
    }
    census(n).map(|r| r.to_json()).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn evaluate_json(expr: &str) -> Result<String, JsError> {
    let e = evaluate(expr).map_err(|m| JsError::new(&m))?;
    Ok(serde_json::to_string(&e).expect("plain data serializes"))
}

#[wasm_bindgen]
pub fn census_json(n: usize) -> Result<String, JsError> {
    census_report(n).map_err(|m| JsError::new(&m))
}
