//! Lattice interchange: a small JSON cover-list format and Graphviz DOT.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{default_names, validate_lattice, Lattice};

/// `{"n": 5, "covers": [[0,1], ...]}`, with optional element names and
/// format version.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl LatticeJson {
    pub fn from_lattice(l: &Lattice) -> LatticeJson {
        let names = (l.names() != default_names(l.len()).as_slice()).then(|| l.names().to_vec());
        LatticeJson { format: Some(1), n: l.len(), covers: l.covers().iter().map(|&(a, b)| [a, b]).collect(), names }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        let l = validate_lattice(self.n, &covers)?;
        match &self.names {
            None => Ok(l),
            Some(names) if names.len() == self.n => Ok(l.with_names(names.clone())),
            Some(names) => Err(Error::SizeMismatch { expected: self.n, found: names.len() }),
        }
    }
}

pub fn lattice_to_json(l: &Lattice) -> String {
    serde_json::to_string(&LatticeJson::from_lattice(l)).expect("plain data serializes")
}

pub fn lattice_from_json(text: &str) -> Result<Lattice> {
    let parsed: LatticeJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    parsed.to_lattice()
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram in DOT, bottom to top, one rank per height.
pub fn to_dot(l: &Lattice, graph_name: &str) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n  node [shape=circle];\n", dot_quote(graph_name));
    for x in l.elements() {
        out.push_str(&format!("  {} [label={}];\n", x, dot_quote(l.name(x))));
    }
    let heights = l.heights();
    let max_height = heights.iter().copied().max().unwrap_or(0);
    for h in 0..=max_height {
        let level: Vec<String> = l.elements().filter(|&x| heights[x] == h).map(|x| x.to_string()).collect();
        if level.len() > 1 {
            out.push_str(&format!("  {{ rank=same; {}; }}\n", level.join("; ")));
        }
    }
    for &(a, b) in l.covers() {
        out.push_str(&format!("  {} -> {};\n", a, b));
    }
    out.push_str("}\n");
    out
}
