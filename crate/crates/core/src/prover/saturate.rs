//! Unfailing completion for unit equalities with a given-clause loop.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::time::Instant;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::index::{
    fingerprint, fp_unifiable, instantiate, match_term, nonvar_positions, BankSubst, DiscTree, Subst,
};
use super::kbo::{kbo, KboResult};
use super::proof::{Bindings, Dir, GoalProof, Proof, ProofStep, RewriteStep, Rule, Side};
use super::term::{Node, Pos, Term, TermBank, TermId};
use crate::axioms::{Axiom, AxiomSet};
use crate::budget::Budget;
use crate::presentation::Presentation;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProverLimits {
    /// Cap on stored equations (active plus passive).
    pub max_kept: usize,
    /// Equations with a side larger than this are discarded, which makes a
    /// later "saturated" verdict unavailable.
    pub max_term_size: u32,
    /// Cap on given-clause iterations.
    pub max_given: usize,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits { max_kept: 3_000_000, max_term_size: 25, max_given: usize::MAX }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofStatus {
    Proved,
    SaturatedWithoutProof,
    ResourceOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Time,
    Cancelled,
    MaxKept,
    MaxTermSize,
    MaxGiven,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProverStats {
    pub generated: u64,
    pub kept: u64,
    pub given: u64,
    pub back_simplified: u64,
    pub discarded_large: u64,
    pub active: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofResult {
    pub status: ProofStatus,
    pub limit: Option<Limit>,
    /// Per subgoal, whether its two sides were joined.
    pub subgoals: Vec<bool>,
    pub proof: Option<Proof>,
    pub stats: ProverStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Passive,
    Active,
    Dead,
}

#[derive(Debug, Clone, Copy)]
enum Deriv {
    Axiom(Axiom),
    Relation(usize),
    Hyp(usize),
    Para { from: u32, from_dir: Dir, into: u32, into_dir: Dir, pos: Pos },
    Rewrite { parent: u32 },
}

#[derive(Debug, Clone, Copy)]
struct RwLog {
    side: u8,
    pos: Pos,
    by: u32,
    dir: Dir,
}

#[derive(Debug, Clone)]
struct EqRec {
    lhs: TermId,
    rhs: TermId,
    state: State,
    oriented: bool,
    deriv: Deriv,
    rewrites: Vec<RwLog>,
    flip: bool,
}

struct GoalRec {
    logs: Vec<RwLog>,
    common: TermId,
}

/// Builds the three axioms with the statement orientation shared with the
/// checker.
pub(crate) fn axiom_terms(bank: &mut TermBank, a: Axiom) -> (TermId, TermId) {
    let (x, y, z) = (bank.var(0), bank.var(1), bank.var(2));
    match a {
        Axiom::Q1 => (bank.app(x, x), x),
        Axiom::Q2 => {
            let xy = bank.app(x, y);
            (bank.app(xy, y), x)
        }
        Axiom::Q3 => {
            let xy = bank.app(x, y);
            let xz = bank.app(x, z);
            let yz = bank.app(y, z);
            (bank.app(xy, z), bank.app(xz, yz))
        }
    }
}

struct Engine<'a> {
    bank: TermBank,
    eqs: Vec<EqRec>,
    active: Vec<u32>,
    demod: DiscTree,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    fifo: VecDeque<u32>,
    picks: u64,
    goals: Vec<(TermId, TermId)>,
    goal_done: Vec<Option<GoalRec>>,
    limits: &'a ProverLimits,
    budget: &'a Budget,
    stats: ProverStats,
    incomplete: bool,
    /// Relations first, then extra hypotheses.
    hyps: Vec<(TermId, TermId)>,
    relations: usize,
    stop: Option<Limit>,
}

impl<'a> Engine<'a> {
    fn side(&self, id: u32, dir: Dir) -> (TermId, TermId) {
        let e = &self.eqs[id as usize];
        match dir {
            Dir::L => (e.lhs, e.rhs),
            Dir::R => (e.rhs, e.lhs),
        }
    }

    /// Directions usable for rewriting: the rule side must bind every
    /// variable of the result side.
    fn rewrite_dirs(&self, id: u32) -> Vec<Dir> {
        let e = &self.eqs[id as usize];
        let covers = |l: TermId, r: TermId| {
            let lv = self.bank.vars(l);
            self.bank.vars(r).iter().all(|(v, _)| lv.iter().any(|(w, _)| w == v))
        };
        let mut out = Vec::new();
        if covers(e.lhs, e.rhs) && !matches!(self.bank.node(e.lhs), Node::Var(_)) {
            out.push(Dir::L);
        }
        if !e.oriented && covers(e.rhs, e.lhs) && !matches!(self.bank.node(e.rhs), Node::Var(_)) {
            out.push(Dir::R);
        }
        out
    }

    fn key(id: u32, dir: Dir) -> u32 {
        id * 2 + if dir == Dir::R { 1 } else { 0 }
    }

    fn rewrite_root(&mut self, t: TermId, cands: &mut Vec<u32>, subst: &mut Subst) -> Option<(TermId, u32, Dir)> {
        self.demod.generalizations(&self.bank, t, cands);
        for i in 0..cands.len() {
            let key = cands[i];
            let id = key / 2;
            let dir = if key % 2 == 1 { Dir::R } else { Dir::L };
            let (l, r) = self.side(id, dir);
            subst.clear();
            if !match_term(&self.bank, l, t, subst) {
                continue;
            }
            let rr = instantiate(&mut self.bank, r, subst);
            if !self.eqs[id as usize].oriented && kbo(&self.bank, t, rr) != KboResult::Greater {
                continue;
            }
            return Some((rr, id, dir));
        }
        None
    }

    fn nf(&mut self, t: TermId, pos: Pos, side: u8, log: &mut Vec<RwLog>, cands: &mut Vec<u32>, subst: &mut Subst) -> TermId {
        let mut t = t;
        if let Node::App(a, b) = self.bank.node(t) {
            if pos.len() + 1 < Pos::MAX_DEPTH {
                let a2 = self.nf(a, pos.child(0), side, log, cands, subst);
                let b2 = self.nf(b, pos.child(1), side, log, cands, subst);
                if a2 != a || b2 != b {
                    t = self.bank.app(a2, b2);
                }
            }
        }
        match self.rewrite_root(t, cands, subst) {
            Some((r, by, dir)) => {
                log.push(RwLog { side, pos, by, dir });
                self.nf(r, pos, side, log, cands, subst)
            }
            None => t,
        }
    }

    fn normalize(&mut self, t: TermId, side: u8, log: &mut Vec<RwLog>) -> TermId {
        if self.demod.is_empty() {
            return t;
        }
        let mut cands = Vec::new();
        let mut subst = Subst::default();
        self.nf(t, Pos::ROOT, side, log, &mut cands, &mut subst)
    }

    fn too_big(&self, t: TermId) -> bool {
        self.bank.size(t) > self.limits.max_term_size || self.bank.depth(t) as usize + 2 >= Pos::MAX_DEPTH
    }

    /// Simplifies a new equation and queues it unless trivial or too large.
    fn add_passive(&mut self, u: TermId, v: TermId, deriv: Deriv) {
        self.stats.generated += 1;
        let mut log = Vec::new();
        let u2 = self.normalize(u, 0, &mut log);
        let v2 = self.normalize(v, 1, &mut log);
        if u2 == v2 {
            return;
        }
        if self.too_big(u2) || self.too_big(v2) {
            self.incomplete = true;
            self.stats.discarded_large += 1;
            return;
        }
        let r = self.bank.rename_canonical(&[u2, v2]);
        let id = self.eqs.len() as u32;
        self.eqs.push(EqRec { lhs: r[0], rhs: r[1], state: State::Passive, oriented: false, deriv, rewrites: log, flip: false });
        let w = self.bank.size(r[0]) + self.bank.size(r[1]);
        self.heap.push(Reverse((w, id)));
        self.fifo.push_back(id);
        self.stats.kept += 1;
        if self.eqs.len() > self.limits.max_kept {
            self.stop = Some(Limit::MaxKept);
        }
    }

    fn pick(&mut self) -> Option<u32> {
        loop {
            self.picks += 1;
            let id = if self.picks % 6 == 0 {
                self.fifo.pop_front().or_else(|| self.heap.pop().map(|r| r.0 .1))
            } else {
                self.heap.pop().map(|r| r.0 .1).or_else(|| self.fifo.pop_front())
            }?;
            if self.eqs[id as usize].state == State::Passive {
                return Some(id);
            }
        }
    }

    fn subsumed(&mut self, s: TermId, t: TermId) -> bool {
        let mut cands = Vec::new();
        let mut subst = Subst::default();
        for (a, b) in [(s, t), (t, s)] {
            self.demod.generalizations(&self.bank, a, &mut cands);
            for &key in &cands {
                let id = key / 2;
                let dir = if key % 2 == 1 { Dir::R } else { Dir::L };
                let (l, r) = self.side(id, dir);
                subst.clear();
                if match_term(&self.bank, l, a, &mut subst) && match_term(&self.bank, r, b, &mut subst) {
                    return true;
                }
            }
        }
        false
    }

    fn activate(&mut self, id: u32) {
        self.eqs[id as usize].state = State::Active;
        self.active.push(id);
        for dir in self.rewrite_dirs(id) {
            let (l, _) = self.side(id, dir);
            self.demod.insert(&self.bank, l, Self::key(id, dir));
        }
    }

    fn kill(&mut self, id: u32) {
        for dir in self.rewrite_dirs(id) {
            let (l, _) = self.side(id, dir);
            self.demod.remove(&self.bank, l, Self::key(id, dir));
        }
        self.eqs[id as usize].state = State::Dead;
    }

    /// Whether `g` rewrites some subterm of `t`.
    fn reducible_by(&mut self, t: TermId, g: u32, dirs: &[Dir], subst: &mut Subst, buf: &mut Vec<(Pos, TermId)>) -> bool {
        buf.clear();
        nonvar_positions(&self.bank, t, buf);
        let oriented = self.eqs[g as usize].oriented;
        for i in 0..buf.len() {
            let sub = buf[i].1;
            for &dir in dirs {
                let (l, r) = self.side(g, dir);
                if self.bank.size(l) > self.bank.size(sub) {
                    continue;
                }
                if self.bank.is_ground(l) {
                    if l == sub {
                        return true;
                    }
                    continue;
                }
                subst.clear();
                if !match_term(&self.bank, l, sub, subst) {
                    continue;
                }
                if oriented {
                    return true;
                }
                let rr = instantiate(&mut self.bank, r, subst);
                if kbo(&self.bank, sub, rr) == KboResult::Greater {
                    return true;
                }
            }
        }
        false
    }

    fn back_simplify(&mut self, g: u32) {
        let dirs = self.rewrite_dirs(g);
        if dirs.is_empty() {
            return;
        }
        let mut subst = Subst::default();
        let mut buf = Vec::new();
        let mut victims = Vec::new();
        for &e in &self.active.clone() {
            if e == g {
                continue;
            }
            let (l, r) = (self.eqs[e as usize].lhs, self.eqs[e as usize].rhs);
            if self.reducible_by(l, g, &dirs, &mut subst, &mut buf) || self.reducible_by(r, g, &dirs, &mut subst, &mut buf) {
                victims.push(e);
            }
        }
        if victims.is_empty() {
            return;
        }
        for &e in &victims {
            self.kill(e);
        }
        let dead: FxHashSet<u32> = victims.iter().copied().collect();
        self.active.retain(|a| !dead.contains(a));
        for e in victims {
            self.stats.back_simplified += 1;
            let (l, r) = (self.eqs[e as usize].lhs, self.eqs[e as usize].rhs);
            self.add_passive(l, r, Deriv::Rewrite { parent: e });
        }
    }

    fn directions(&self, id: u32) -> Vec<Dir> {
        if self.eqs[id as usize].oriented {
            vec![Dir::L]
        } else {
            vec![Dir::L, Dir::R]
        }
    }

    fn superpose(&mut self, from: u32, into: u32, u: &mut BankSubst, positions: &mut Vec<(Pos, TermId)>) {
        let from_oriented = self.eqs[from as usize].oriented;
        let into_oriented = self.eqs[into as usize].oriented;
        for fdir in self.directions(from) {
            let (fl, fr) = self.side(from, fdir);
            if matches!(self.bank.node(fl), Node::Var(_)) {
                continue;
            }
            let fp = fingerprint(&self.bank, fl);
            for idir in self.directions(into) {
                let (s, t) = self.side(into, idir);
                positions.clear();
                nonvar_positions(&self.bank, s, positions);
                for k in 0..positions.len() {
                    let (p, sub) = positions[k];
                    if from == into && fdir == idir && p.is_empty() {
                        continue;
                    }
                    if !fp_unifiable(&fp, &fingerprint(&self.bank, sub)) {
                        continue;
                    }
                    u.clear();
                    if !u.unify(&self.bank, fl, 0, sub, 1) {
                        continue;
                    }
                    let mut fresh = Vec::new();
                    let sl = u.apply(&mut self.bank, fl, 0, &mut fresh);
                    let sr = u.apply(&mut self.bank, fr, 0, &mut fresh);
                    if !from_oriented && matches!(kbo(&self.bank, sl, sr), KboResult::Less | KboResult::Equal) {
                        continue;
                    }
                    let ss = u.apply(&mut self.bank, s, 1, &mut fresh);
                    let st = u.apply(&mut self.bank, t, 1, &mut fresh);
                    if !into_oriented && matches!(kbo(&self.bank, ss, st), KboResult::Less | KboResult::Equal) {
                        continue;
                    }
                    let new_s = self.bank.replace(ss, p, sr);
                    self.add_passive(new_s, st, Deriv::Para { from, from_dir: fdir, into, into_dir: idir, pos: p });
                    if self.stop.is_some() {
                        return;
                    }
                }
            }
        }
    }

    fn generate(&mut self, g: u32) {
        let partners = self.active.clone();
        let mut u = BankSubst::default();
        let mut positions = Vec::new();
        for (k, &e) in partners.iter().enumerate() {
            if self.eqs[g as usize].state != State::Active {
                return;
            }
            self.superpose(g, e, &mut u, &mut positions);
            if e != g {
                self.superpose(e, g, &mut u, &mut positions);
            }
            if self.stop.is_some() {
                return;
            }
            if k % 16 == 0 && self.budget.exhausted() {
                self.stop = Some(if self.budget.is_cancelled() { Limit::Cancelled } else { Limit::Time });
                return;
            }
        }
    }

    fn check_goals(&mut self) {
        for i in 0..self.goals.len() {
            if self.goal_done[i].is_some() {
                continue;
            }
            let (a, b) = self.goals[i];
            let mut logs = Vec::new();
            let na = self.normalize(a, 0, &mut logs);
            let nb = self.normalize(b, 1, &mut logs);
            if na == nb {
                self.goal_done[i] = Some(GoalRec { logs, common: na });
            }
        }
    }

    fn all_goals_done(&self) -> bool {
        self.goal_done.iter().all(Option::is_some)
    }

    fn process(&mut self, id: u32) {
        self.stats.given += 1;
        let (l, r) = (self.eqs[id as usize].lhs, self.eqs[id as usize].rhs);
        let mut log = Vec::new();
        let l2 = self.normalize(l, 0, &mut log);
        let r2 = self.normalize(r, 1, &mut log);
        let mut id = id;
        if !log.is_empty() {
            self.eqs[id as usize].state = State::Dead;
            if l2 == r2 {
                return;
            }
            let rn = self.bank.rename_canonical(&[l2, r2]);
            let nid = self.eqs.len() as u32;
            self.eqs.push(EqRec {
                lhs: rn[0],
                rhs: rn[1],
                state: State::Passive,
                oriented: false,
                deriv: Deriv::Rewrite { parent: id },
                rewrites: log,
                flip: false,
            });
            id = nid;
        }
        let (l, r) = (self.eqs[id as usize].lhs, self.eqs[id as usize].rhs);
        if l == r || self.subsumed(l, r) {
            self.eqs[id as usize].state = State::Dead;
            return;
        }
        match kbo(&self.bank, l, r) {
            KboResult::Greater => self.eqs[id as usize].oriented = true,
            KboResult::Less => {
                let e = &mut self.eqs[id as usize];
                std::mem::swap(&mut e.lhs, &mut e.rhs);
                e.flip = true;
                e.oriented = true;
            }
            _ => {}
        }
        self.activate(id);
        self.back_simplify(id);
        self.check_goals();
        if self.all_goals_done() {
            return;
        }
        self.generate(id);
    }

    fn run(&mut self) -> ProofStatus {
        self.check_goals();
        loop {
            if self.all_goals_done() {
                return ProofStatus::Proved;
            }
            if self.stop.is_some() {
                return ProofStatus::ResourceOut;
            }
            if self.budget.exhausted() {
                self.stop = Some(if self.budget.is_cancelled() { Limit::Cancelled } else { Limit::Time });
                return ProofStatus::ResourceOut;
            }
            if self.stats.given as usize >= self.limits.max_given {
                self.stop = Some(Limit::MaxGiven);
                return ProofStatus::ResourceOut;
            }
            let Some(id) = self.pick() else {
                if self.incomplete {
                    self.stop = Some(Limit::MaxTermSize);
                    return ProofStatus::ResourceOut;
                }
                return ProofStatus::SaturatedWithoutProof;
            };
            self.process(id);
        }
    }

    // ----- proof extraction -----

    fn start_of(&mut self, id: u32) -> (TermId, TermId, Rule) {
        match self.eqs[id as usize].deriv {
            Deriv::Axiom(a) => {
                let (l, r) = axiom_terms(&mut self.bank, a);
                (l, r, Rule::Axiom(a))
            }
            Deriv::Relation(i) => {
                let (l, r) = self.hyps[i];
                (l, r, Rule::Relation(i))
            }
            Deriv::Hyp(i) => {
                let (l, r) = self.hyps[self.relations + i];
                (l, r, Rule::Hypothesis(i))
            }
            Deriv::Rewrite { parent } => {
                let p = &self.eqs[parent as usize];
                (p.lhs, p.rhs, Rule::Rewrite { parent: parent as usize })
            }
            Deriv::Para { from, from_dir, into, into_dir, pos } => {
                let (fl, fr) = self.side(from, from_dir);
                let (s, t) = self.side(into, into_dir);
                let sub = self.bank.subterm(s, pos);
                let mut u = BankSubst::default();
                let ok = u.unify(&self.bank, fl, 0, sub, 1);
                assert!(ok, "recorded superposition no longer unifies");
                let mut fresh = Vec::new();
                u.apply(&mut self.bank, fl, 0, &mut fresh);
                let sr = u.apply(&mut self.bank, fr, 0, &mut fresh);
                let ss = u.apply(&mut self.bank, s, 1, &mut fresh);
                let st = u.apply(&mut self.bank, t, 1, &mut fresh);
                let from_vars = self.eq_vars(from);
                let into_vars = self.eq_vars(into);
                let fs = u.extract(&mut self.bank, 0, &mut fresh, &from_vars);
                let is = u.extract(&mut self.bank, 1, &mut fresh, &into_vars);
                let new_s = self.bank.replace(ss, pos, sr);
                let rule = Rule::Para {
                    from: from as usize,
                    from_dir,
                    into: into as usize,
                    into_dir,
                    pos: pos.to_vec(),
                    from_subst: self.bindings(&fs),
                    into_subst: self.bindings(&is),
                };
                (new_s, st, rule)
            }
        }
    }

    fn eq_vars(&self, id: u32) -> Vec<u32> {
        let e = &self.eqs[id as usize];
        let mut vs: Vec<u32> = self.bank.vars(e.lhs).iter().chain(self.bank.vars(e.rhs)).map(|v| v.0).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn bindings(&self, s: &Subst) -> Bindings {
        s.binds.iter().map(|&(v, t)| (v, self.bank.to_tree(t))).collect()
    }

    /// Replays logged rewrites on `(u, v)`, recovering each matcher.
    fn replay(&mut self, mut sides: [TermId; 2], logs: &[RwLog]) -> ([TermId; 2], Vec<RewriteStep>) {
        let mut out = Vec::with_capacity(logs.len());
        for lg in logs {
            let cur = sides[lg.side as usize];
            let sub = self.bank.subterm(cur, lg.pos);
            let (l, r) = self.side(lg.by, lg.dir);
            let mut s = Subst::default();
            let ok = match_term(&self.bank, l, sub, &mut s);
            assert!(ok, "logged rewrite does not match");
            let rr = instantiate(&mut self.bank, r, &s);
            sides[lg.side as usize] = self.bank.replace(cur, lg.pos, rr);
            out.push(RewriteStep {
                side: if lg.side == 0 { Side::Lhs } else { Side::Rhs },
                pos: lg.pos.to_vec(),
                by: lg.by as usize,
                dir: lg.dir,
                subst: self.bindings(&s),
            });
        }
        (sides, out)
    }

    fn extract(&mut self, names: &[String]) -> Proof {
        let mut needed: FxHashSet<u32> = FxHashSet::default();
        let mut stack: Vec<u32> = Vec::new();
        for g in self.goal_done.iter().flatten() {
            stack.extend(g.logs.iter().map(|l| l.by));
        }
        while let Some(id) = stack.pop() {
            if !needed.insert(id) {
                continue;
            }
            let e = &self.eqs[id as usize];
            stack.extend(e.rewrites.iter().map(|l| l.by));
            match e.deriv {
                Deriv::Para { from, into, .. } => {
                    stack.push(from);
                    stack.push(into);
                }
                Deriv::Rewrite { parent } => stack.push(parent),
                _ => {}
            }
        }
        let mut ids: Vec<u32> = needed.into_iter().collect();
        ids.sort_unstable();
        let mut steps = Vec::with_capacity(ids.len());
        for id in ids {
            let (u, v, rule) = self.start_of(id);
            let logs = self.eqs[id as usize].rewrites.clone();
            let (_, rewrites) = self.replay([u, v], &logs);
            let e = &self.eqs[id as usize];
            steps.push(ProofStep {
                id: id as usize,
                lhs: self.bank.to_tree(e.lhs),
                rhs: self.bank.to_tree(e.rhs),
                rule,
                rewrites,
                flip: e.flip,
            });
        }
        let mut goals = Vec::new();
        for i in 0..self.goals.len() {
            let Some(g) = &self.goal_done[i] else { continue };
            let (logs, common) = (g.logs.clone(), g.common);
            let (a, b) = self.goals[i];
            let (_, rw) = self.replay([a, b], &logs);
            let (lhs_steps, rhs_steps): (Vec<RewriteStep>, Vec<RewriteStep>) =
                rw.into_iter().partition(|s| s.side == Side::Lhs);
            goals.push(GoalProof {
                index: i,
                lhs: self.bank.to_tree(a),
                rhs: self.bank.to_tree(b),
                lhs_steps,
                rhs_steps,
                common: self.bank.to_tree(common),
            });
        }
        Proof { names: names.to_vec(), steps, goals }
    }
}

/// Runs completion on the presentation's relations plus `hyps`, under the
/// chosen axioms, until every subgoal joins, the set saturates, or a limit
/// trips.
pub fn saturate_with(
    p: &Presentation,
    axioms: AxiomSet,
    hyps: &[(Term, Term)],
    limits: &ProverLimits,
    budget: &Budget,
) -> ProofResult {
    let goals: Vec<(Term, Term)> = p.goal.iter().map(|&(i, j)| (Term::Const(i as u32), Term::Const(j as u32))).collect();
    saturate_goals(p, axioms, hyps, &goals, limits, budget)
}

/// As [`saturate_with`] with arbitrary ground goals in place of the
/// presentation's chain.
pub fn saturate_goals(
    p: &Presentation,
    axioms: AxiomSet,
    hyps: &[(Term, Term)],
    goals: &[(Term, Term)],
    limits: &ProverLimits,
    budget: &Budget,
) -> ProofResult {
    let started = Instant::now();
    let mut e = Engine {
        bank: TermBank::new(),
        eqs: Vec::new(),
        active: Vec::new(),
        demod: DiscTree::default(),
        heap: BinaryHeap::new(),
        fifo: VecDeque::new(),
        picks: 0,
        goals: Vec::new(),
        goal_done: Vec::new(),
        limits,
        budget,
        stats: ProverStats::default(),
        incomplete: false,
        hyps: Vec::new(),
        relations: p.relations.len(),
        stop: None,
    };
    for a in axioms.iter() {
        let (l, r) = axiom_terms(&mut e.bank, a);
        e.add_passive(l, r, Deriv::Axiom(a));
    }
    for (i, rel) in p.relations.iter().enumerate() {
        let (a, b, c) = (e.bank.constant(rel.a as u32), e.bank.constant(rel.b as u32), e.bank.constant(rel.c as u32));
        let ab = e.bank.app(a, b);
        e.hyps.push((ab, c));
        e.add_passive(ab, c, Deriv::Relation(i));
    }
    for (i, (l, r)) in hyps.iter().enumerate() {
        let (l, r) = (e.bank.from_tree(l), e.bank.from_tree(r));
        e.hyps.push((l, r));
        e.add_passive(l, r, Deriv::Hyp(i));
    }
    for (l, r) in goals {
        let (a, b) = (e.bank.from_tree(l), e.bank.from_tree(r));
        e.goals.push((a, b));
        e.goal_done.push(None);
    }
    let status = e.run();
    let proof = if status == ProofStatus::Proved { Some(e.extract(&p.generators)) } else { None };
    e.stats.active = e.active.len();
    e.stats.elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;
    ProofResult {
        status,
        limit: if status == ProofStatus::ResourceOut { e.stop } else { None },
        subgoals: e.goal_done.iter().map(Option::is_some).collect(),
        proof,
        stats: e.stats,
    }
}
