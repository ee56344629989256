//! Equational prover: completion over the quandle axioms plus the
//! relations of a presentation, aimed at collapsing all generators.

pub mod check;
pub mod index;
pub mod kbo;
pub mod proof;
pub mod saturate;
pub mod term;

pub use check::{check_proof, check_proof_goals, ProofError};
pub use kbo::{kbo_compare, KboResult};
pub use proof::{Proof, ProofStep, Rule};
pub use saturate::{saturate_goals, saturate_with, Limit, ProofResult, ProofStatus, ProverLimits, ProverStats};
pub use term::{parse_term, Term};

use crate::axioms::AxiomSet;
use crate::budget::Budget;
use crate::presentation::Presentation;
use index::{instantiate, match_term, Subst};
use term::{Node, TermBank, TermId};

/// Tries to derive every subgoal of `p` from the relations and `axioms`.
pub fn saturate(p: &Presentation, axioms: AxiomSet, limits: &ProverLimits, budget: &Budget) -> ProofResult {
    saturate_with(p, axioms, &[], limits, budget)
}

/// Whether the result carries a proof that the replay checker accepts.
pub fn verify_proof(r: &ProofResult, p: &Presentation, axioms: AxiomSet) -> bool {
    r.status == ProofStatus::Proved && r.proof.as_ref().is_some_and(|pr| check_proof(pr, p, axioms, &[]).is_ok())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule {index} is not oriented left to right")]
pub struct UnorientedRule {
    pub index: usize,
}

/// Rewrites `t` to normal form with rules that must each decrease in the
/// term order.
pub fn normalize(t: &Term, rules: &[(Term, Term)]) -> Result<Term, UnorientedRule> {
    let mut bank = TermBank::new();
    let mut rs = Vec::with_capacity(rules.len());
    for (i, (l, r)) in rules.iter().enumerate() {
        let (l, r) = (bank.from_tree(l), bank.from_tree(r));
        if kbo::kbo(&bank, l, r) != KboResult::Greater {
            return Err(UnorientedRule { index: i });
        }
        rs.push((l, r));
    }
    let t = bank.from_tree(t);
    let n = nf(&mut bank, t, &rs);
    Ok(bank.to_tree(n))
}

fn nf(bank: &mut TermBank, t: TermId, rs: &[(TermId, TermId)]) -> TermId {
    let mut t = t;
    if let Node::App(a, b) = bank.node(t) {
        let (a2, b2) = (nf(bank, a, rs), nf(bank, b, rs));
        t = bank.app(a2, b2);
    }
    let mut s = Subst::default();
    for &(l, r) in rs {
        s.clear();
        if match_term(bank, l, t, &mut s) {
            let u = instantiate(bank, r, &s);
            return nf(bank, u, rs);
        }
    }
    t
}
