//! Finite involutory quandle countermodels: tables, an independent checker,
//! the backtracking search and the minimal-size driver.

mod minimal;
mod search;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::axioms::{Axiom, AxiomSet};
use crate::presentation::Presentation;

pub use minimal::{find_minimal_countermodel, find_minimal_countermodel_with, SearchOutcome, SearchResult, SizeRecord, SizeVerdict};
pub use search::{find_model, find_model_with, Interrupted, ModelSearch, SearchStats, MAX_SIZE};

/// An operation table with an optional interpretation of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteQuandle {
    pub size: usize,
    /// Row-major; `table[i * size + j]` is `i ▷ j`.
    pub table: Vec<usize>,
    pub assignment: Option<Vec<usize>>,
}

impl FiniteQuandle {
    pub fn from_rows(rows: &[Vec<usize>]) -> Self {
        let size = rows.len();
        FiniteQuandle { size, table: rows.concat(), assignment: None }
    }

    pub fn with_assignment(mut self, a: Vec<usize>) -> Self {
        self.assignment = Some(a);
        self
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size.max(1)).map(<[usize]>::to_vec).collect()
    }

    /// Whether the table is closed and satisfies the chosen axioms.
    pub fn satisfies(&self, axioms: AxiomSet) -> bool {
        let n = self.size;
        if n == 0 || self.table.len() != n * n || self.table.iter().any(|&v| v >= n) {
            return false;
        }
        let t = |i: usize, j: usize| self.table[i * n + j];
        for i in 0..n {
            if axioms.contains(Axiom::Q1) && t(i, i) != i {
                return false;
            }
            for j in 0..n {
                if axioms.contains(Axiom::Q2) && t(t(i, j), j) != i {
                    return false;
                }
                if axioms.contains(Axiom::Q3) {
                    for k in 0..n {
                        if t(t(i, j), k) != t(t(i, k), t(j, k)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Elements reachable from the generator values by the operation.
    pub fn generated(&self) -> Vec<usize> {
        let Some(a) = &self.assignment else { return Vec::new() };
        let mut inside = vec![false; self.size];
        let mut elems: Vec<usize> = Vec::new();
        for &v in a {
            if !inside[v] {
                inside[v] = true;
                elems.push(v);
            }
        }
        let mut k = 0;
        while k < elems.len() {
            for idx in 0..=k {
                for (x, y) in [(elems[idx], elems[k]), (elems[k], elems[idx])] {
                    let z = self.op(x, y);
                    if !inside[z] {
                        inside[z] = true;
                        elems.push(z);
                    }
                }
            }
            k += 1;
        }
        elems.sort_unstable();
        elems
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "size": self.size,
            "table": self.rows(),
            "assignment": self.assignment,
        })
    }
}

/// Direct check of the axioms, the relations and that not every generator
/// takes the same value.
pub fn check_model(m: &FiniteQuandle, p: &Presentation, axioms: AxiomSet) -> bool {
    let Some(a) = &m.assignment else { return false };
    if a.len() != p.generators.len() || a.iter().any(|&v| v >= m.size) {
        return false;
    }
    if !m.satisfies(axioms) {
        return false;
    }
    if p.relations.iter().any(|r| m.op(a[r.a], a[r.b]) != a[r.c]) {
        return false;
    }
    a.iter().any(|&v| v != a[0])
}

/// Prints the model in the interpretation syntax of the usual finite model
/// finders, with `seconds` fixed at 0.
pub fn format_interpretation(m: &FiniteQuandle, names: &[String]) -> String {
    let mut out = format!("interpretation( {}, [number=1, seconds=0], [\n", m.size);
    if let Some(a) = &m.assignment {
        for (k, v) in a.iter().enumerate() {
            let name = names.get(k).cloned().unwrap_or_else(|| format!("a{}", k + 1));
            let _ = writeln!(out, "        function({name}, [ {v} ]),");
        }
    }
    out.push_str("        function(*(_,_), [\n");
    let rows = m.rows();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        let end = if i + 1 == rows.len() { " ])" } else { "," };
        let _ = writeln!(out, "\t\t\t   {}{}", cells.join(", "), end);
    }
    out.push_str("]).\n");
    out
}
