//! Proof objects and their text / JSON forms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::term::{var_name, Term};
use crate::axioms::Axiom;

/// Which side of an equation is used left-to-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dir {
    /// lhs is replaced by rhs
    L,
    /// rhs is replaced by lhs
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Lhs,
    Rhs,
}

/// Explicit substitution `var ↦ term`.
pub type Bindings = Vec<(u32, Term)>;

/// Rewrites the subterm at `pos` of one side with equation `by` instantiated
/// by `subst`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub side: Side,
    pub pos: Vec<u8>,
    pub by: usize,
    pub dir: Dir,
    pub subst: Bindings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Axiom(Axiom),
    /// Index into the presentation's relations.
    Relation(usize),
    /// Index into the extra hypotheses passed to the prover.
    Hypothesis(usize),
    /// Superposition of `from` into the `into_dir` side of `into` at `pos`.
    Para {
        from: usize,
        from_dir: Dir,
        into: usize,
        into_dir: Dir,
        pos: Vec<u8>,
        from_subst: Bindings,
        into_subst: Bindings,
    },
    /// Continues from an earlier equation (simplification).
    Rewrite { parent: usize },
}

/// One equation of the proof: the rule's conclusion, then `rewrites` in
/// order, then an optional side swap, yields `lhs = rhs` up to renaming of
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub id: usize,
    pub lhs: Term,
    pub rhs: Term,
    pub rule: Rule,
    pub rewrites: Vec<RewriteStep>,
    pub flip: bool,
}

/// Both sides of a ground subgoal rewritten to a common term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalProof {
    pub index: usize,
    pub lhs: Term,
    pub rhs: Term,
    pub lhs_steps: Vec<RewriteStep>,
    pub rhs_steps: Vec<RewriteStep>,
    pub common: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    /// Generator names used when printing constants.
    pub names: Vec<String>,
    pub steps: Vec<ProofStep>,
    pub goals: Vec<GoalProof>,
}

fn pos_text(p: &[u8]) -> String {
    p.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn dir_text(d: Dir) -> &'static str {
    match d {
        Dir::L => "l",
        Dir::R => "r",
    }
}

fn side_text(s: Side) -> &'static str {
    match s {
        Side::Lhs => "a",
        Side::Rhs => "b",
    }
}

fn rewrites_text(rs: &[RewriteStep]) -> String {
    let parts: Vec<String> = rs
        .iter()
        .map(|r| {
            let mut s = format!("{}{}({}", r.by, dir_text(r.dir), side_text(r.side));
            if !r.pos.is_empty() {
                s.push(',');
                s.push_str(&pos_text(&r.pos));
            }
            s.push(')');
            s
        })
        .collect();
    format!("rewrite([{}])", parts.join(","))
}

impl Proof {
    pub fn step(&self, id: usize) -> Option<&ProofStep> {
        self.steps.binary_search_by_key(&id, |s| s.id).ok().map(|i| &self.steps[i])
    }

    /// One line per step, `id. lhs = rhs.  [rule(...)]`, followed by one line
    /// per subgoal. Positions count arguments from 1; `l`/`r` after a
    /// premise id tells which side was used left to right.
    pub fn to_text(&self) -> String {
        let n = &self.names;
        let mut out = String::new();
        for s in &self.steps {
            let mut just = match &s.rule {
                Rule::Axiom(a) => format!("axiom({})", a.name()),
                Rule::Relation(i) => format!("assumption({})", i + 1),
                Rule::Hypothesis(i) => format!("hypothesis({})", i + 1),
                Rule::Para { from, from_dir, into, into_dir, pos, .. } => {
                    let p = if pos.is_empty() { String::new() } else { format!(",{}", pos_text(pos)) };
                    format!("para({}{},{}{}{})", from, dir_text(*from_dir), into, dir_text(*into_dir), p)
                }
                Rule::Rewrite { parent } => format!("back_rewrite({parent})"),
            };
            if !s.rewrites.is_empty() {
                just.push(',');
                just.push_str(&rewrites_text(&s.rewrites));
            }
            if s.flip {
                just.push_str(",flip");
            }
            let _ = writeln!(out, "{}. {} = {}.  [{}].", s.id, s.lhs.display(n), s.rhs.display(n), just);
        }
        for g in &self.goals {
            let mut just = format!("goal({})", g.index + 1);
            if !g.lhs_steps.is_empty() {
                just.push_str(",lhs:");
                just.push_str(&rewrites_text(&g.lhs_steps));
            }
            if !g.rhs_steps.is_empty() {
                just.push_str(",rhs:");
                just.push_str(&rewrites_text(&g.rhs_steps));
            }
            let _ = writeln!(
                out,
                "goal {}. {} = {}.  [{}]  joined at {}.",
                g.index + 1,
                g.lhs.display(n),
                g.rhs.display(n),
                just,
                g.common.display(n)
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("proof serializes")
    }
}

/// Formats `x ↦ t` bindings for diagnostics.
pub fn bindings_text(b: &Bindings, names: &[String]) -> String {
    let parts: Vec<String> = b.iter().map(|(v, t)| format!("{} := {}", var_name(*v), t.display(names))).collect();
    parts.join(", ")
}
