//! The decision procedure: the prover and the countermodel search race on
//! one presentation, and whichever answers first cancels the other.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::AxiomSet;
use crate::budget::Budget;
use crate::invariants::{determinant_of, dihedral_countermodel_of, smallest_prime_factor};
use crate::knotio::{parse_gauss, parse_pd, KnotInput, ParseError};
use crate::modelfinder::{check_model, find_minimal_countermodel_with, FiniteQuandle, SearchOutcome, SizeRecord};
use crate::presentation::{presentation_from_relations, presentation_of, Presentation};
use crate::prover::{saturate, verify_proof, Limit, Proof, ProofStatus, ProverLimits, ProverStats};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub timeout: Duration,
    pub limits: ProverLimits,
    pub max_size: usize,
    pub axioms: AxiomSet,
    pub json: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            timeout: Duration::from_secs(60),
            limits: ProverLimits::default(),
            max_size: 64,
            axioms: AxiomSet::ALL,
            json: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        if self.timeout.is_zero() {
            return Err(RunError::Config("timeout must be positive".into()));
        }
        if self.max_size < 2 {
            return Err(RunError::Config("max size must be at least 2".into()));
        }
        if self.axioms.is_empty() {
            return Err(RunError::Config("axiom set is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("bad configuration: {0}")]
    Config(String),
    /// An engine produced a result its checker rejects, or both engines
    /// claimed a verified answer.
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unknot,
    Knotted,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Unknot => 0,
            Status::Knotted => 1,
            Status::Unknown => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unknot => "unknot",
            Status::Knotted => "knotted",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProverReport {
    pub status: ProofStatus,
    pub limit: Option<Limit>,
    pub subgoals: Vec<bool>,
    pub verified: bool,
    pub stats: ProverStats,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelReport {
    pub sizes_refuted: Vec<usize>,
    pub sizes: Vec<SizeRecord>,
    /// Every smaller size was refuted.
    pub minimal: bool,
    pub verified: bool,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DihedralCheck {
    pub determinant: String,
    pub prime: Option<u64>,
    /// `R_p` with a Fox coloring satisfies the presentation.
    pub model_verified: bool,
    /// No contradiction with the race verdict: `R_p` excludes `unknot`, and
    /// a minimal countermodel is never larger than `p`.
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionReport {
    pub schema: u32,
    pub input: String,
    pub status: Status,
    pub generators: usize,
    pub relations: usize,
    pub axioms: String,
    pub proof: Option<Proof>,
    pub countermodel: Option<FiniteQuandle>,
    pub prover: ProverReport,
    pub model: ModelReport,
    pub dihedral: Option<DihedralCheck>,
    pub elapsed_ms: f64,
}

impl DecisionReport {
    pub fn size(&self) -> Option<usize> {
        self.countermodel.as_ref().map(|m| m.size)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn presentation_of_input(input: &KnotInput) -> Presentation {
    match input {
        KnotInput::Diagram(d) => presentation_of(d),
        KnotInput::Relations(r) => presentation_from_relations(r),
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Races the prover against the countermodel search under one deadline.
pub fn decide(input: &KnotInput, descriptor: &str, cfg: &RunConfig) -> Result<DecisionReport, RunError> {
    decide_presentation(&presentation_of_input(input), descriptor, cfg)
}

pub fn decide_presentation(p: &Presentation, descriptor: &str, cfg: &RunConfig) -> Result<DecisionReport, RunError> {
    cfg.validate()?;
    let started = Instant::now();
    let root = Budget::with_timeout(cfg.timeout);
    let (proved, search) = std::thread::scope(|s| {
        let prover = s.spawn(|| {
            let r = saturate(p, cfg.axioms, &cfg.limits, &root);
            if r.status == ProofStatus::Proved {
                root.cancel();
            }
            r
        });
        let finder = s.spawn(|| {
            let o = find_minimal_countermodel_with(p, cfg.axioms, cfg.max_size, &root);
            if o.model().is_some() {
                root.cancel();
            }
            o
        });
        (prover.join().expect("prover thread"), finder.join().expect("model thread"))
    });
    let proof_ok = verify_proof(&proved, p, cfg.axioms);
    if proved.status == ProofStatus::Proved && !proof_ok {
        return Err(RunError::Internal("the prover's proof failed replay".into()));
    }
    let model_ok = search.model().is_some_and(|m| check_model(m, p, cfg.axioms));
    if search.model().is_some() && !model_ok {
        return Err(RunError::Internal("the countermodel fails its check".into()));
    }
    if proof_ok && model_ok {
        return Err(RunError::Internal("both a verified proof and a verified countermodel".into()));
    }
    let status = if proof_ok {
        Status::Unknot
    } else if model_ok {
        Status::Knotted
    } else {
        Status::Unknown
    };
    let dihedral = dihedral_check(p, cfg.axioms, status, &search);
    let model = ModelReport {
        sizes_refuted: search.sizes_refuted.clone(),
        sizes: search.sizes.clone(),
        minimal: search.is_certified(),
        verified: model_ok,
        elapsed_ms: search.elapsed_ms,
    };
    let prover = ProverReport {
        status: proved.status,
        limit: proved.limit,
        subgoals: proved.subgoals.clone(),
        verified: proof_ok,
        stats: proved.stats.clone(),
    };
    Ok(DecisionReport {
        schema: REPORT_SCHEMA,
        input: descriptor.to_string(),
        status,
        generators: p.generators.len(),
        relations: p.relations.len(),
        axioms: cfg.axioms.to_string(),
        proof: if proof_ok { proved.proof } else { None },
        countermodel: search.model().cloned(),
        prover,
        model,
        dihedral,
        elapsed_ms: ms(started.elapsed()),
    })
}

/// Only meaningful with all three axioms, where dihedral quandles are models.
fn dihedral_check(p: &Presentation, axioms: AxiomSet, status: Status, search: &SearchOutcome) -> Option<DihedralCheck> {
    if axioms != AxiomSet::ALL || p.generators.len() < 2 {
        return None;
    }
    let det = determinant_of(p);
    let prime = smallest_prime_factor(&det);
    let model = dihedral_countermodel_of(p);
    let model_verified = model.as_ref().is_some_and(|m| check_model(m, p, axioms));
    let consistent = match (&model, status) {
        (Some(_), Status::Unknot) => false,
        (Some(m), Status::Knotted) => search.size().is_some_and(|s| s <= m.size),
        _ => true,
    };
    Some(DihedralCheck { determinant: det.to_string(), prime, model_verified, consistent })
}

// ----- batch -----

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub name: String,
    pub input: Result<KnotInput, String>,
}

/// `<name> <format> <code>` per line; `%` starts a comment line.
pub fn parse_table(text: &str) -> Vec<TableEntry> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'))
        .map(|(i, l)| {
            let mut it = l.trim().splitn(3, char::is_whitespace);
            let name = it.next().unwrap_or_default().to_string();
            let input = match (it.next(), it.next()) {
                (Some(f), Some(code)) => match f.to_ascii_lowercase().as_str() {
                    "pd" => parse_pd(code).map(KnotInput::Diagram).map_err(|e| e.to_string()),
                    "gauss" => parse_gauss(code).map(KnotInput::Diagram).map_err(|e| e.to_string()),
                    other => Err(format!("line {}: unknown format '{other}'", i + 1)),
                },
                _ => Err(format!("line {}: expected '<name> <format> <code>'", i + 1)),
            };
            TableEntry { name, input }
        })
        .collect()
}

/// `knot<TAB>size` rows; a header line is allowed.
pub fn parse_expected(text: &str) -> Vec<(String, usize)> {
    text.lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let (n, s) = (it.next()?, it.next()?);
            Some((n.to_string(), s.parse().ok()?))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchRow {
    pub name: String,
    pub status: Option<Status>,
    pub size: Option<usize>,
    pub minimal: bool,
    pub elapsed_ms: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub name: String,
    pub expected: usize,
    pub found: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchReport {
    pub rows: Vec<BatchRow>,
    pub mismatches: Option<Vec<Mismatch>>,
}

impl BatchReport {
    pub fn to_table(&self) -> String {
        let mut out = String::from("knot\tstatus\tsize\tms\n");
        for r in &self.rows {
            let status = match (&r.status, &r.error) {
                (Some(s), _) => s.as_str().to_string(),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "error".into(),
            };
            let size = r.size.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
            out.push_str(&format!("{}\t{}\t{}\t{:.0}\n", r.name, status, size, r.elapsed_ms));
        }
        if let Some(ms) = &self.mismatches {
            out.push_str(&format!("mismatches: {}\n", ms.len()));
            for m in ms {
                let found = m.found.map(|s| s.to_string()).unwrap_or_else(|| "none".into());
                out.push_str(&format!("  {}: expected {}, found {}\n", m.name, m.expected, found));
            }
        }
        out
    }
}

/// Worker count from `UNKNOT_WORKERS`, else half the available cores.
pub fn worker_count() -> usize {
    std::env::var("UNKNOT_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| (n.get() / 2).max(1)))
}

/// Decides every entry; failures are recorded per row.
pub fn batch(entries: &[TableEntry], expected: Option<&[(String, usize)]>, cfg: &RunConfig, workers: usize) -> BatchReport {
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<BatchRow>>> = Mutex::new(vec![None; entries.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers.max(1).min(entries.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(e) = entries.get(i) else { break };
                let row = match &e.input {
                    Err(msg) => BatchRow {
                        name: e.name.clone(),
                        status: None,
                        size: None,
                        minimal: false,
                        elapsed_ms: 0.0,
                        error: Some(msg.clone()),
                    },
                    Ok(input) => match decide(input, &e.name, cfg) {
                        Ok(r) => BatchRow {
                            name: e.name.clone(),
                            status: Some(r.status),
                            size: r.size(),
                            minimal: r.model.minimal,
                            elapsed_ms: r.elapsed_ms,
                            error: None,
                        },
                        Err(err) => BatchRow {
                            name: e.name.clone(),
                            status: None,
                            size: None,
                            minimal: false,
                            elapsed_ms: 0.0,
                            error: Some(err.to_string()),
                        },
                    },
                };
                rows.lock().expect("rows lock")[i] = Some(row);
            });
        }
    });
    let rows: Vec<BatchRow> = rows.into_inner().expect("rows lock").into_iter().map(|r| r.expect("every row ran")).collect();
    let mismatches = expected.map(|exp| {
        exp.iter()
            .filter_map(|(name, size)| {
                let row = rows.iter().find(|r| &r.name == name)?;
                let found = row.size.filter(|_| row.minimal);
                (found != Some(*size)).then(|| Mismatch { name: name.clone(), expected: *size, found })
            })
            .collect()
    });
    BatchReport { rows, mismatches }
}
