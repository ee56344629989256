//! Minimal countermodel search: sizes 2, 3, ... in turn.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::search::{find_model_with, ModelSearch, SearchStats};
use super::FiniteQuandle;
use crate::axioms::AxiomSet;
use crate::budget::Budget;
use crate::presentation::Presentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeVerdict {
    Refuted,
    Found,
    Interrupted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SizeRecord {
    pub size: usize,
    pub verdict: SizeVerdict,
    pub nodes: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchResult {
    Found(FiniteQuandle),
    Exhausted { max_size: usize },
    ResourceOut,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub result: SearchResult,
    /// Sizes shown to have no model, in increasing order from 2.
    pub sizes_refuted: Vec<usize>,
    pub sizes: Vec<SizeRecord>,
    pub elapsed_ms: f64,
}

impl SearchOutcome {
    pub fn model(&self) -> Option<&FiniteQuandle> {
        match &self.result {
            SearchResult::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn size(&self) -> Option<usize> {
        self.model().map(|m| m.size)
    }

    /// Every size from 2 below the model's was refuted.
    pub fn is_certified(&self) -> bool {
        match self.size() {
            Some(n) => self.sizes_refuted == (2..n).collect::<Vec<_>>(),
            None => false,
        }
    }
}

pub fn find_minimal_countermodel(p: &Presentation, max_size: usize, budget: &Budget) -> SearchOutcome {
    find_minimal_countermodel_with(p, AxiomSet::ALL, max_size, budget)
}

/// Tries each size from 2 to `max_size`. Once every smaller size is refuted
/// a model must be generated by the generator values, which the search
/// exploits.
pub fn find_minimal_countermodel_with(p: &Presentation, axioms: AxiomSet, max_size: usize, budget: &Budget) -> SearchOutcome {
    let started = Instant::now();
    let opts = ModelSearch { generated_only: true, node_limit: None };
    let mut sizes = Vec::new();
    let mut refuted = Vec::new();
    let mut result = SearchResult::Exhausted { max_size };
    for n in 2..=max_size.min(super::search::MAX_SIZE) {
        let mut st = SearchStats::default();
        let r = find_model_with(p, axioms, n, &opts, budget, &mut st);
        let verdict = match &r {
            Ok(Some(_)) => SizeVerdict::Found,
            Ok(None) => SizeVerdict::Refuted,
            Err(_) => SizeVerdict::Interrupted,
        };
        sizes.push(SizeRecord { size: n, verdict, nodes: st.nodes, elapsed_ms: st.elapsed_ms });
        match r {
            Ok(Some(m)) => {
                result = SearchResult::Found(m);
                break;
            }
            Ok(None) => refuted.push(n),
            Err(_) => {
                result = SearchResult::ResourceOut;
                break;
            }
        }
    }
    SearchOutcome { result, sizes_refuted: refuted, sizes, elapsed_ms: started.elapsed().as_secs_f64() * 1000.0 }
}
