//! Backtracking over constants and table cells with propagation of the
//! axioms and relations, and least-number symmetry breaking.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{check_model, FiniteQuandle};
use crate::axioms::{Axiom, AxiomSet};
use crate::budget::Budget;
use crate::presentation::{Presentation, Relation};

const NONE: u8 = u8::MAX;
/// Largest table the search handles (element bitmasks are `u128`).
pub const MAX_SIZE: usize = 128;
const POLL_EVERY: u64 = 1 << 14;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ModelSearch {
    /// Fail any branch whose generators close up below the full size. Only
    /// sound when every smaller size is already known to have no model.
    pub generated_only: bool,
    pub node_limit: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("model search stopped by its budget")]
pub struct Interrupted;

#[derive(Clone, Copy)]
enum Undo {
    Cell(u32),
    Const(u16),
    Max(i32),
}

struct Solver<'a> {
    n: usize,
    q1: bool,
    q2: bool,
    q3: bool,
    t: Vec<u8>,
    col_used: Vec<u128>,
    consts: Vec<u8>,
    rels: &'a [Relation],
    trail: Vec<Undo>,
    queue: Vec<u32>,
    /// Largest element introduced so far; later ones are interchangeable.
    mx: i32,
    opts: &'a ModelSearch,
    budget: &'a Budget,
    nodes: u64,
    interrupted: bool,
    p: &'a Presentation,
    axioms: AxiomSet,
}

impl Solver<'_> {
    #[inline]
    fn get(&self, i: usize, j: usize) -> u8 {
        self.t[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: u8) -> bool {
        let c = i * self.n + j;
        let cur = self.t[c];
        if cur != NONE {
            return cur == v;
        }
        if self.q2 && self.col_used[j] >> v & 1 == 1 {
            return false;
        }
        self.t[c] = v;
        self.col_used[j] |= 1u128 << v;
        self.trail.push(Undo::Cell(c as u32));
        self.queue.push(c as u32);
        true
    }

    fn set_const(&mut self, k: usize, v: u8) -> bool {
        let cur = self.consts[k];
        if cur != NONE {
            return cur == v;
        }
        self.consts[k] = v;
        self.trail.push(Undo::Const(k as u16));
        true
    }

    fn raise_max(&mut self, v: u8) {
        if v as i32 > self.mx {
            self.trail.push(Undo::Max(self.mx));
            self.mx = v as i32;
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("nonempty trail") {
                Undo::Cell(c) => {
                    let c = c as usize;
                    let v = self.t[c];
                    self.col_used[c % self.n] &= !(1u128 << v);
                    self.t[c] = NONE;
                }
                Undo::Const(k) => self.consts[k as usize] = NONE,
                Undo::Max(m) => self.mx = m,
            }
        }
        self.queue.clear();
    }

    /// Self-distributivity for the triple `(a, b, k)`:
    /// `(a ▷ b) ▷ k = (a ▷ k) ▷ (b ▷ k)`.
    fn enforce(&mut self, a: usize, b: usize, k: usize) -> bool {
        let u = self.get(a, b);
        let x = self.get(a, k);
        let y = self.get(b, k);
        if u == NONE || x == NONE || y == NONE {
            return true;
        }
        let (u, x, y) = (u as usize, x as usize, y as usize);
        let l = self.get(u, k);
        let r = self.get(x, y);
        match (l != NONE, r != NONE) {
            (true, true) => l == r,
            (true, false) => self.set(x, y, l),
            (false, true) => self.set(u, k, r),
            (false, false) => true,
        }
    }

    /// Consequences of the cell `c` having just been filled.
    fn fire(&mut self, c: usize) -> bool {
        let n = self.n;
        let (i, j) = (c / n, c % n);
        let v = self.t[c];
        if self.q2 && !self.set(v as usize, j, i as u8) {
            return false;
        }
        if !self.q3 {
            return true;
        }
        for k in 0..n {
            // (i, j) as the inner product a ▷ b
            if !self.enforce(i, j, k) {
                return false;
            }
            // (i, j) as a ▷ k
            if !self.enforce(i, k, j) {
                return false;
            }
            // (i, j) as b ▷ k
            if !self.enforce(k, i, j) {
                return false;
            }
        }
        if self.q2 {
            // (i, j) as (a ▷ b) ▷ k with a ▷ b = i: a is i ▷ b.
            for b in 0..n {
                let a = self.get(i, b);
                if a != NONE && !self.enforce(a as usize, b, j) {
                    return false;
                }
            }
            // (i, j) as (a ▷ k) ▷ (b ▷ k): a = i ▷ k and b = j ▷ k.
            for k in 0..n {
                let (a, b) = (self.get(i, k), self.get(j, k));
                if a != NONE && b != NONE && !self.enforce(a as usize, b as usize, k) {
                    return false;
                }
            }
        } else {
            for k in 0..n {
                for a in 0..n {
                    if self.get(a, k) as usize == i {
                        for b in 0..n {
                            if self.get(b, k) as usize == j && !self.enforce(a, b, k) {
                                return false;
                            }
                        }
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    if self.get(a, b) as usize == i && !self.enforce(a, b, j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn relations_pass(&mut self) -> Option<bool> {
        let mut changed = false;
        for r in self.rels {
            let (va, vb, vc) = (self.consts[r.a], self.consts[r.b], self.consts[r.c]);
            if va != NONE && vb != NONE {
                let cell = self.get(va as usize, vb as usize);
                if cell != NONE {
                    if vc == NONE {
                        self.set_const(r.c, cell);
                        changed = true;
                    } else if vc != cell {
                        return None;
                    }
                } else if vc != NONE {
                    if !self.set(va as usize, vb as usize, vc) {
                        return None;
                    }
                    changed = true;
                }
            } else if self.q2 && va == NONE && vb != NONE && vc != NONE {
                let x = self.get(vc as usize, vb as usize);
                if x != NONE {
                    self.set_const(r.a, x);
                    changed = true;
                }
            }
        }
        Some(changed)
    }

    fn propagate(&mut self) -> bool {
        loop {
            while let Some(c) = self.queue.pop() {
                if !self.fire(c as usize) {
                    self.queue.clear();
                    return false;
                }
            }
            match self.relations_pass() {
                None => return false,
                Some(false) if self.queue.is_empty() => break,
                _ => {}
            }
        }
        // All generators equal is excluded.
        let c0 = self.consts[0];
        if c0 != NONE && self.consts.iter().all(|&v| v == c0) {
            return false;
        }
        true
    }

    fn poll(&mut self) -> bool {
        self.nodes += 1;
        if self.opts.node_limit.is_some_and(|l| self.nodes > l) {
            self.interrupted = true;
        } else if self.nodes % POLL_EVERY == 0 && self.budget.exhausted() {
            self.interrupted = true;
        }
        !self.interrupted
    }

    fn value_limit(&self) -> usize {
        ((self.mx + 1) as usize).min(self.n - 1)
    }

    /// Tries `v` at a decision point described by `assign`.
    fn branch(&mut self, v: u8, assign: impl FnOnce(&mut Self) -> bool) -> Option<FiniteQuandle> {
        let mark = self.trail.len();
        self.raise_max(v);
        let ok = assign(self) && self.propagate();
        let found = if ok { self.search() } else { None };
        if found.is_none() {
            self.undo_to(mark);
        }
        found
    }

    fn pick_cell(&self) -> Option<(usize, usize, u128)> {
        let m = (self.mx + 1) as usize;
        let allowed: u128 = if self.value_limit() >= 127 { u128::MAX } else { (1u128 << (self.value_limit() + 1)) - 1 };
        // Columns of generator values first: they determine the rest.
        let gen_cols = self.consts.iter().filter(|&&v| v != NONE).fold(0u128, |m, &v| m | 1u128 << v);
        let mut best: Option<(u32, bool, usize, usize, u128)> = None;
        for i in 0..m {
            for j in 0..m {
                if self.get(i, j) != NONE {
                    continue;
                }
                let cand = if self.q2 { allowed & !self.col_used[j] } else { allowed };
                let cnt = cand.count_ones();
                let other = gen_cols >> j & 1 == 0;
                if best.is_none_or(|b| (cnt, other) < (b.0, b.1)) {
                    best = Some((cnt, other, i, j, cand));
                    if cnt <= 1 {
                        return Some((i, j, cand));
                    }
                }
            }
        }
        best.map(|b| (b.2, b.3, b.4))
    }

    fn model_from_block(&self, m: usize) -> FiniteQuandle {
        let n = self.n;
        let mut table = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = if i < m && j < m { self.get(i, j) as usize } else { i };
            }
        }
        let assignment = self.consts.iter().map(|&v| v as usize).collect();
        FiniteQuandle { size: n, table, assignment: Some(assignment) }
    }

    fn search(&mut self) -> Option<FiniteQuandle> {
        if !self.poll() {
            return None;
        }
        if let Some(k) = self.consts.iter().position(|&v| v == NONE) {
            for v in 0..=self.value_limit() as u8 {
                if let Some(m) = self.branch(v, |s| s.set_const(k, v)) {
                    return Some(m);
                }
                if self.interrupted {
                    return None;
                }
            }
            return None;
        }
        match self.pick_cell() {
            Some((i, j, cand)) => {
                let mut rest = cand;
                while rest != 0 {
                    let v = rest.trailing_zeros() as u8;
                    rest &= rest - 1;
                    if let Some(m) = self.branch(v, |s| s.set(i, j, v)) {
                        return Some(m);
                    }
                    if self.interrupted {
                        return None;
                    }
                }
                None
            }
            None => {
                let m = (self.mx + 1) as usize;
                if m < self.n && self.opts.generated_only {
                    return None;
                }
                let model = self.model_from_block(m);
                check_model(&model, self.p, self.axioms).then_some(model)
            }
        }
    }
}

/// Searches for a model of size `n` of the selected axioms, the relations
/// of `p`, and "not all generators equal".
pub fn find_model(p: &Presentation, axioms: AxiomSet, n: usize, budget: &Budget) -> Result<Option<FiniteQuandle>, Interrupted> {
    find_model_with(p, axioms, n, &ModelSearch::default(), budget, &mut SearchStats::default())
}

pub fn find_model_with(
    p: &Presentation,
    axioms: AxiomSet,
    n: usize,
    opts: &ModelSearch,
    budget: &Budget,
    stats: &mut SearchStats,
) -> Result<Option<FiniteQuandle>, Interrupted> {
    assert!((1..=MAX_SIZE).contains(&n), "model size {n} out of range");
    let started = Instant::now();
    if p.generators.len() < 2 || n < 2 {
        // "not all generators equal" needs two generators and two elements.
        return Ok(None);
    }
    let mut s = Solver {
        n,
        q1: axioms.contains(Axiom::Q1),
        q2: axioms.contains(Axiom::Q2),
        q3: axioms.contains(Axiom::Q3),
        t: vec![NONE; n * n],
        col_used: vec![0; n],
        consts: vec![NONE; p.generators.len()],
        rels: &p.relations,
        trail: Vec::new(),
        queue: Vec::new(),
        mx: -1,
        opts,
        budget,
        nodes: 0,
        interrupted: false,
        p,
        axioms,
    };
    let mut ok = true;
    if s.q1 {
        for i in 0..n {
            ok &= s.set(i, i, i as u8);
        }
    }
    ok = ok && s.propagate();
    let found = if ok { s.search() } else { None };
    stats.nodes += s.nodes;
    stats.elapsed_ms += started.elapsed().as_secs_f64() * 1000.0;
    match found {
        Some(m) => Ok(Some(m)),
        None if s.interrupted => Err(Interrupted),
        None => Ok(None),
    }
}
