//! Replays a proof on plain tree terms, without the engine's term bank,
//! indexes or ordering.

use std::collections::HashMap;
use std::fmt;

use super::proof::{Bindings, Dir, Proof, RewriteStep, Rule};
use super::term::Term;
use crate::axioms::{Axiom, AxiomSet};
use crate::presentation::Presentation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofError {
    /// Step id, or `None` for a subgoal failure.
    pub step: Option<usize>,
    pub goal: Option<usize>,
    pub msg: String,
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.step, self.goal) {
            (Some(s), _) => write!(f, "step {s}: {}", self.msg),
            (None, Some(g)) => write!(f, "goal {}: {}", g + 1, self.msg),
            _ => write!(f, "{}", self.msg),
        }
    }
}

impl std::error::Error for ProofError {}

fn v(i: u32) -> Term {
    Term::Var(i)
}

fn ap(a: Term, b: Term) -> Term {
    Term::app(a, b)
}

fn axiom(a: Axiom) -> (Term, Term) {
    match a {
        Axiom::Q1 => (ap(v(0), v(0)), v(0)),
        Axiom::Q2 => (ap(ap(v(0), v(1)), v(1)), v(0)),
        Axiom::Q3 => (ap(ap(v(0), v(1)), v(2)), ap(ap(v(0), v(2)), ap(v(1), v(2)))),
    }
}

fn subst(t: &Term, b: &Bindings) -> Term {
    match t {
        Term::Var(x) => b.iter().find(|(y, _)| y == x).map(|(_, u)| u.clone()).unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(l, r) => ap(subst(l, b), subst(r, b)),
    }
}

fn at<'a>(t: &'a Term, pos: &[u8]) -> Option<&'a Term> {
    let mut t = t;
    for &c in pos {
        match t {
            Term::App(l, r) => t = if c == 0 { l } else { r },
            _ => return None,
        }
    }
    Some(t)
}

fn put(t: &Term, pos: &[u8], r: &Term) -> Option<Term> {
    match pos.split_first() {
        None => Some(r.clone()),
        Some((&c, rest)) => match t {
            Term::App(a, b) if c == 0 => Some(ap(put(a, rest, r)?, (**b).clone())),
            Term::App(a, b) => Some(ap((**a).clone(), put(b, rest, r)?)),
            _ => None,
        },
    }
}

/// Same equation up to a consistent renaming of variables.
fn variant(a: (&Term, &Term), b: (&Term, &Term)) -> bool {
    fn go(x: &Term, y: &Term, fw: &mut HashMap<u32, u32>, bw: &mut HashMap<u32, u32>) -> bool {
        match (x, y) {
            (Term::Var(p), Term::Var(q)) => *fw.entry(*p).or_insert(*q) == *q && *bw.entry(*q).or_insert(*p) == *p,
            (Term::Const(p), Term::Const(q)) => p == q,
            (Term::App(x1, x2), Term::App(y1, y2)) => go(x1, y1, fw, bw) && go(x2, y2, fw, bw),
            _ => false,
        }
    }
    let (mut fw, mut bw) = (HashMap::new(), HashMap::new());
    go(a.0, b.0, &mut fw, &mut bw) && go(a.1, b.1, &mut fw, &mut bw)
}

fn oriented(eq: &(Term, Term), d: Dir) -> (&Term, &Term) {
    match d {
        Dir::L => (&eq.0, &eq.1),
        Dir::R => (&eq.1, &eq.0),
    }
}

struct Checker<'a> {
    done: HashMap<usize, (Term, Term)>,
    current: usize,
    _names: &'a [String],
}

impl Checker<'_> {
    fn premise(&self, id: usize) -> Result<&(Term, Term), String> {
        if id >= self.current {
            return Err(format!("premise {id} is not earlier"));
        }
        self.done.get(&id).ok_or_else(|| format!("premise {id} is not in the proof"))
    }

    fn rewrite(&self, sides: &mut [Term; 2], r: &RewriteStep) -> Result<(), String> {
        let eq = self.premise(r.by)?;
        let (l, rr) = oriented(eq, r.dir);
        let side = &mut sides[r.side as usize];
        let sub = at(side, &r.pos).ok_or("rewrite position outside the term")?;
        if subst(l, &r.subst) != *sub {
            return Err(format!("rewrite by {} does not match at {:?}", r.by, r.pos));
        }
        *side = put(side, &r.pos, &subst(rr, &r.subst)).expect("position checked");
        Ok(())
    }
}

/// Checks every step and every subgoal of `proof` against the presentation,
/// the allowed axioms and any extra hypotheses.
pub fn check_proof(proof: &Proof, p: &Presentation, axioms: AxiomSet, hyps: &[(Term, Term)]) -> Result<(), ProofError> {
    let goals: Vec<(Term, Term)> = p.goal.iter().map(|&(i, j)| (Term::Const(i as u32), Term::Const(j as u32))).collect();
    check_proof_goals(proof, p, axioms, hyps, &goals)
}

/// As [`check_proof`] against explicit ground goals.
pub fn check_proof_goals(
    proof: &Proof,
    p: &Presentation,
    axioms: AxiomSet,
    hyps: &[(Term, Term)],
    goals: &[(Term, Term)],
) -> Result<(), ProofError> {
    let mut ck = Checker { done: HashMap::new(), current: 0, _names: &proof.names };
    let mut last = None;
    for s in &proof.steps {
        let err = |msg: String| ProofError { step: Some(s.id), goal: None, msg };
        if last.is_some_and(|l| s.id <= l) {
            return Err(err("step ids must increase".into()));
        }
        last = Some(s.id);
        ck.current = s.id;
        let (u, w) = match &s.rule {
            Rule::Axiom(a) => {
                if !axioms.contains(*a) {
                    return Err(err(format!("axiom {} is not allowed", a.name())));
                }
                axiom(*a)
            }
            Rule::Relation(i) => {
                let r = p.relations.get(*i).ok_or_else(|| err(format!("no relation {i}")))?;
                (ap(Term::Const(r.a as u32), Term::Const(r.b as u32)), Term::Const(r.c as u32))
            }
            Rule::Hypothesis(i) => hyps.get(*i).cloned().ok_or_else(|| err(format!("no hypothesis {i}")))?,
            Rule::Rewrite { parent } => ck.premise(*parent).map_err(err)?.clone(),
            Rule::Para { from, from_dir, into, into_dir, pos, from_subst, into_subst } => {
                let f = ck.premise(*from).map_err(err)?;
                let g = ck.premise(*into).map_err(err)?;
                let (fl, fr) = oriented(f, *from_dir);
                let (gs, gt) = oriented(g, *into_dir);
                let (fl, fr) = (subst(fl, from_subst), subst(fr, from_subst));
                let (gs, gt) = (subst(gs, into_subst), subst(gt, into_subst));
                match at(&gs, pos) {
                    Some(sub) if *sub == fl => {}
                    _ => return Err(err("superposition premises do not overlap".into())),
                }
                if matches!(at(&gs, pos), Some(Term::Var(_))) {
                    return Err(err("superposition into a variable".into()));
                }
                (put(&gs, pos, &fr).expect("position checked"), gt)
            }
        };
        let mut sides = [u, w];
        for r in &s.rewrites {
            ck.rewrite(&mut sides, r).map_err(err)?;
        }
        let [mut u, mut w] = sides;
        if s.flip {
            std::mem::swap(&mut u, &mut w);
        }
        if !variant((&u, &w), (&s.lhs, &s.rhs)) {
            return Err(err("derived equation differs from the stated one".into()));
        }
        ck.done.insert(s.id, (s.lhs.clone(), s.rhs.clone()));
    }
    ck.current = usize::MAX;
    for (i, (a, b)) in goals.iter().enumerate() {
        let err = |msg: &str| ProofError { step: None, goal: Some(i), msg: msg.into() };
        let g = proof.goals.iter().find(|g| g.index == i).ok_or_else(|| err("subgoal has no proof"))?;
        if g.lhs != *a || g.rhs != *b {
            return Err(err("subgoal sides differ from the presentation"));
        }
        let mut sides = [g.lhs.clone(), g.rhs.clone()];
        for r in g.lhs_steps.iter().chain(&g.rhs_steps) {
            ck.rewrite(&mut sides, r).map_err(|m| err(&m))?;
        }
        if sides[0] != g.common || sides[1] != g.common {
            return Err(err("sides do not meet at the common term"));
        }
    }
    Ok(())
}
