//! Matching, unification and term indexing.

use super::term::{Node, Pos, TermBank, TermId};

/// Variable bindings from a pattern's variables, as a short assoc list.
#[derive(Debug, Clone, Default)]
pub struct Subst {
    pub binds: Vec<(u32, TermId)>,
}

impl Subst {
    pub fn get(&self, v: u32) -> Option<TermId> {
        self.binds.iter().find(|b| b.0 == v).map(|b| b.1)
    }

    pub fn clear(&mut self) {
        self.binds.clear();
    }
}

/// One-way matching: extends `s` so that `pattern·s == target`. Variables
/// of `target` are treated as constants. On failure `s` may hold junk.
pub fn match_term(bank: &TermBank, pattern: TermId, target: TermId, s: &mut Subst) -> bool {
    match bank.node(pattern) {
        Node::Var(v) => match s.get(v) {
            Some(t) => t == target,
            None => {
                s.binds.push((v, target));
                true
            }
        },
        Node::Const(_) => pattern == target,
        Node::App(p1, p2) => {
            if bank.is_ground(pattern) {
                return pattern == target;
            }
            match bank.node(target) {
                Node::App(t1, t2) => match_term(bank, p1, t1, s) && match_term(bank, p2, t2, s),
                _ => false,
            }
        }
    }
}

pub fn instantiate(bank: &mut TermBank, t: TermId, s: &Subst) -> TermId {
    if bank.is_ground(t) {
        return t;
    }
    match bank.node(t) {
        Node::Var(v) => s.get(v).unwrap_or(t),
        Node::Const(_) => t,
        Node::App(a, b) => {
            let a2 = instantiate(bank, a, s);
            let b2 = instantiate(bank, b, s);
            bank.app(a2, b2)
        }
    }
}

/// Bindings for two variable-disjoint "banks" of terms (the two premises of
/// an inference), so neither premise has to be renamed before unifying.
#[derive(Debug, Default)]
pub struct BankSubst {
    binds: Vec<((u32, u8), (TermId, u8))>,
}

impl BankSubst {
    pub fn clear(&mut self) {
        self.binds.clear();
    }

    fn lookup(&self, v: u32, b: u8) -> Option<(TermId, u8)> {
        self.binds.iter().find(|x| x.0 == (v, b)).map(|x| x.1)
    }

    fn deref(&self, bank: &TermBank, mut t: TermId, mut b: u8) -> (TermId, u8) {
        while let Node::Var(v) = bank.node(t) {
            match self.lookup(v, b) {
                Some((t2, b2)) => {
                    t = t2;
                    b = b2;
                }
                None => break,
            }
        }
        (t, b)
    }

    fn occurs(&self, bank: &TermBank, v: u32, vb: u8, t: TermId, tb: u8) -> bool {
        let (t, tb) = self.deref(bank, t, tb);
        if bank.is_ground(t) {
            return false;
        }
        match bank.node(t) {
            Node::Var(w) => w == v && tb == vb,
            Node::Const(_) => false,
            Node::App(a, b) => self.occurs(bank, v, vb, a, tb) || self.occurs(bank, v, vb, b, tb),
        }
    }

    pub fn unify(&mut self, bank: &TermBank, s: TermId, sb: u8, t: TermId, tb: u8) -> bool {
        let (s, sb) = self.deref(bank, s, sb);
        let (t, tb) = self.deref(bank, t, tb);
        if s == t && (sb == tb || bank.is_ground(s)) {
            return true;
        }
        match (bank.node(s), bank.node(t)) {
            (Node::Var(v), _) => {
                if self.occurs(bank, v, sb, t, tb) {
                    return false;
                }
                self.binds.push(((v, sb), (t, tb)));
                true
            }
            (_, Node::Var(w)) => {
                if self.occurs(bank, w, tb, s, sb) {
                    return false;
                }
                self.binds.push(((w, tb), (s, sb)));
                true
            }
            (Node::Const(a), Node::Const(b)) => a == b,
            (Node::App(s1, s2), Node::App(t1, t2)) => {
                self.unify(bank, s1, sb, t1, tb) && self.unify(bank, s2, sb, t2, tb)
            }
            _ => false,
        }
    }

    /// Applies the bindings, naming unbound variables by first encounter
    /// through `fresh`.
    pub fn apply(&self, bank: &mut TermBank, t: TermId, tb: u8, fresh: &mut Vec<(u32, u8)>) -> TermId {
        let (t, tb) = self.deref(bank, t, tb);
        if bank.is_ground(t) {
            return t;
        }
        match bank.node(t) {
            Node::Var(v) => {
                let idx = match fresh.iter().position(|&f| f == (v, tb)) {
                    Some(i) => i,
                    None => {
                        fresh.push((v, tb));
                        fresh.len() - 1
                    }
                };
                bank.var(idx as u32)
            }
            Node::Const(_) => t,
            Node::App(a, b) => {
                let a2 = self.apply(bank, a, tb, fresh);
                let b2 = self.apply(bank, b, tb, fresh);
                bank.app(a2, b2)
            }
        }
    }

    /// Bindings restricted to one bank, with every binding fully applied.
    pub fn extract(&self, bank: &mut TermBank, b: u8, fresh: &mut Vec<(u32, u8)>, vars: &[u32]) -> Subst {
        let mut out = Subst::default();
        for &v in vars {
            let var = bank.var(v);
            let t = self.apply(bank, var, b, fresh);
            out.binds.push((v, t));
        }
        out
    }
}

/// Non-variable subterm positions of `t`, in preorder.
pub fn nonvar_positions(bank: &TermBank, t: TermId, out: &mut Vec<(Pos, TermId)>) {
    fn rec(bank: &TermBank, t: TermId, p: Pos, out: &mut Vec<(Pos, TermId)>) {
        match bank.node(t) {
            Node::Var(_) => {}
            Node::Const(_) => out.push((p, t)),
            Node::App(a, b) => {
                out.push((p, t));
                if p.len() + 1 < Pos::MAX_DEPTH {
                    rec(bank, a, p.child(0), out);
                    rec(bank, b, p.child(1), out);
                }
            }
        }
    }
    rec(bank, t, Pos::ROOT, out);
}

// Fingerprint features at positions ε, 1, 2, 11, 12, 21, 22.
const F_BELOW_VAR: u32 = 0;
const F_NONE: u32 = 1;
const F_VAR: u32 = 2;
const F_APP: u32 = 3;
const F_CONST: u32 = 4;

pub type Fingerprint = [u32; 7];

pub fn fingerprint(bank: &TermBank, t: TermId) -> Fingerprint {
    fn feat(bank: &TermBank, t: Option<TermId>, parent_var: bool) -> (u32, Option<(TermId, TermId)>, bool) {
        match t {
            None if parent_var => (F_BELOW_VAR, None, true),
            None => (F_NONE, None, false),
            Some(t) => match bank.node(t) {
                Node::Var(_) => (F_VAR, None, true),
                Node::Const(c) => (F_CONST + c, None, false),
                Node::App(a, b) => (F_APP, Some((a, b)), false),
            },
        }
    }
    let mut fp = [0u32; 7];
    let (f0, k0, v0) = feat(bank, Some(t), false);
    fp[0] = f0;
    let (c1, c2) = (k0.map(|k| k.0), k0.map(|k| k.1));
    let (f1, k1, v1) = feat(bank, c1, v0);
    let (f2, k2, v2) = feat(bank, c2, v0);
    fp[1] = f1;
    fp[2] = f2;
    fp[3] = feat(bank, k1.map(|k| k.0), v1).0;
    fp[4] = feat(bank, k1.map(|k| k.1), v1).0;
    fp[5] = feat(bank, k2.map(|k| k.0), v2).0;
    fp[6] = feat(bank, k2.map(|k| k.1), v2).0;
    fp
}

/// Necessary condition for two terms to unify.
pub fn fp_unifiable(a: &Fingerprint, b: &Fingerprint) -> bool {
    a.iter().zip(b).all(|(&x, &y)| feature_compatible(x, y))
}

fn feature_compatible(x: u32, y: u32) -> bool {
    if x == F_BELOW_VAR || y == F_BELOW_VAR || x == y {
        return true;
    }
    if x == F_NONE || y == F_NONE {
        return false;
    }
    // Remaining: variable against application or constant, or a clash.
    x == F_VAR || y == F_VAR
}

const STAR: u32 = 0;
const APP: u32 = 1;

#[derive(Debug, Default, Clone)]
struct DNode {
    kids: Vec<(u32, u32)>,
    entries: Vec<u32>,
}

/// Perfect discrimination tree retrieving stored terms that generalize a
/// query term.
#[derive(Debug, Clone)]
pub struct DiscTree {
    nodes: Vec<DNode>,
    len: usize,
}

impl Default for DiscTree {
    fn default() -> Self {
        DiscTree { nodes: vec![DNode::default()], len: 0 }
    }
}

fn symbol(bank: &TermBank, t: TermId) -> u32 {
    match bank.node(t) {
        Node::Var(_) => STAR,
        Node::App(..) => APP,
        Node::Const(c) => 2 + c,
    }
}

fn preorder(bank: &TermBank, t: TermId, out: &mut Vec<TermId>) {
    out.push(t);
    if let Node::App(a, b) = bank.node(t) {
        preorder(bank, a, out);
        preorder(bank, b, out);
    }
}

impl DiscTree {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, bank: &TermBank, t: TermId, key: u32) {
        let mut seq = Vec::new();
        preorder(bank, t, &mut seq);
        let mut n = 0usize;
        for &s in &seq {
            let sym = symbol(bank, s);
            n = match self.nodes[n].kids.iter().find(|k| k.0 == sym) {
                Some(&(_, c)) => c as usize,
                None => {
                    let c = self.nodes.len();
                    self.nodes.push(DNode::default());
                    self.nodes[n].kids.push((sym, c as u32));
                    c
                }
            };
        }
        self.nodes[n].entries.push(key);
        self.len += 1;
    }

    pub fn remove(&mut self, bank: &TermBank, t: TermId, key: u32) {
        let mut seq = Vec::new();
        preorder(bank, t, &mut seq);
        let mut n = 0usize;
        for &s in &seq {
            let sym = symbol(bank, s);
            match self.nodes[n].kids.iter().find(|k| k.0 == sym) {
                Some(&(_, c)) => n = c as usize,
                None => return,
            }
        }
        if let Some(i) = self.nodes[n].entries.iter().position(|&k| k == key) {
            self.nodes[n].entries.swap_remove(i);
            self.len -= 1;
        }
    }

    /// Keys of stored terms that may match onto `t` (non-linear patterns
    /// still need a real match).
    pub fn generalizations(&self, bank: &TermBank, t: TermId, out: &mut Vec<u32>) {
        out.clear();
        if self.len == 0 {
            return;
        }
        let mut seq = Vec::new();
        preorder(bank, t, &mut seq);
        // skip[i]: preorder index just past the subterm rooted at i
        let mut skip = vec![0usize; seq.len()];
        for i in (0..seq.len()).rev() {
            skip[i] = match bank.node(seq[i]) {
                Node::App(..) => {
                    let after_left = skip[i + 1];
                    skip[after_left]
                }
                _ => i + 1,
            };
        }
        skip.push(seq.len());
        let syms: Vec<u32> = seq
            .iter()
            .map(|&s| match bank.node(s) {
                Node::Var(_) => u32::MAX,
                _ => symbol(bank, s),
            })
            .collect();
        self.walk(0, 0, &syms, &skip, out);
    }

    fn walk(&self, n: usize, qi: usize, syms: &[u32], skip: &[usize], out: &mut Vec<u32>) {
        if qi == syms.len() {
            out.extend_from_slice(&self.nodes[n].entries);
            return;
        }
        for &(sym, c) in &self.nodes[n].kids {
            if sym == STAR {
                self.walk(c as usize, skip[qi], syms, skip, out);
            } else if sym == syms[qi] {
                self.walk(c as usize, qi + 1, syms, skip, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn app(b: &mut TermBank, x: TermId, y: TermId) -> TermId {
        b.app(x, y)
    }

    #[test]
    fn matching_and_instances() {
        let mut b = TermBank::new();
        let (x, y) = (b.var(0), b.var(1));
        let (c0, c1) = (b.constant(0), b.constant(1));
        let xy = app(&mut b, x, y);
        let pat = app(&mut b, xy, y);
        let c0c1 = app(&mut b, c0, c1);
        let target = app(&mut b, c0c1, c1);
        let mut s = Subst::default();
        assert!(match_term(&b, pat, target, &mut s));
        assert_eq!(instantiate(&mut b, x, &s), c0);
        let bad = app(&mut b, c0c1, c0);
        let mut s = Subst::default();
        assert!(!match_term(&b, pat, bad, &mut s));
    }

    #[test]
    fn unify_across_banks() {
        let mut b = TermBank::new();
        let (x, y) = (b.var(0), b.var(1));
        let xy = b.app(x, y);
        let l = b.app(xy, y);
        let xx = b.app(x, x);
        let mut u = BankSubst::default();
        // x' := x*y, then y = x*y fails the occurs check
        assert!(!u.unify(&b, l, 0, xx, 1));
        u.clear();
        assert!(u.unify(&b, xy, 0, xx, 1));
        let mut fresh = Vec::new();
        let r = u.apply(&mut b, xy, 0, &mut fresh);
        let v0 = b.var(0);
        assert_eq!(r, b.app(v0, v0));
    }

    #[test]
    fn disc_tree_retrieval() {
        let mut b = TermBank::new();
        let (x, c0, c1) = (b.var(0), b.constant(0), b.constant(1));
        let xx = b.app(x, x);
        let xc1 = b.app(x, c1);
        let c0c1 = b.app(c0, c1);
        let mut d = DiscTree::default();
        d.insert(&b, xx, 1);
        d.insert(&b, xc1, 2);
        d.insert(&b, c0c1, 3);
        let mut out = Vec::new();
        d.generalizations(&b, c0c1, &mut out);
        out.sort();
        assert_eq!(out, vec![1, 2, 3]);
        let q = b.app(c0c1, c1);
        d.generalizations(&b, q, &mut out);
        out.sort();
        assert_eq!(out, vec![1, 2]);
        d.remove(&b, xc1, 2);
        d.generalizations(&b, q, &mut out);
        assert_eq!(out, vec![1]);
    }

    #[test]
    fn fingerprints_filter_clashes() {
        let mut b = TermBank::new();
        let (x, c0, c1) = (b.var(0), b.constant(0), b.constant(1));
        let a = b.app(c0, x);
        let a2 = b.app(c1, x);
        let a3 = b.app(x, c1);
        assert!(!fp_unifiable(&fingerprint(&b, a), &fingerprint(&b, a2)));
        assert!(fp_unifiable(&fingerprint(&b, a), &fingerprint(&b, a3)));
        assert!(!fp_unifiable(&fingerprint(&b, a), &fingerprint(&b, c0)));
        assert!(fp_unifiable(&fingerprint(&b, x), &fingerprint(&b, a)));
    }
}
