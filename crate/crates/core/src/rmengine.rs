//! Reidemeister moves on PD diagrams, and the labelled equation trace that
//! turns an untangling sequence into an equational proof.
//!
//! Edge ids in move sites refer to the canonical numbering (see
//! [`KnotDiagram::canonical`]); crossing ids are 1-based positions in the
//! crossing list. Removed crossings drop out of the list, new ones are
//! appended.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{Axiom, AxiomSet};
use crate::budget::Budget;
use crate::knotio::{KnotDiagram, UnionFind};
use crate::modelfinder::{find_minimal_countermodel_with, SearchOutcome};
use crate::presentation::{arcs_of, presentation_of, Presentation};
use crate::prover::{check_proof_goals, saturate_goals, saturate_with, ProofResult, ProofStatus, ProverLimits, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    Rm1Up,
    Rm1Down,
    Rm2Up,
    Rm2Down,
    Rm3,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Rm1Up => "RM1_up",
            MoveKind::Rm1Down => "RM1_down",
            MoveKind::Rm2Up => "RM2_up",
            MoveKind::Rm2Down => "RM2_down",
            MoveKind::Rm3 => "RM3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// For a new curl, whether the strand first passes under or over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pass {
    Under,
    Over,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSpec {
    pub kind: MoveKind,
    /// 1-based crossing positions (RM1_down: 1, RM2_down: 2, RM3: 3).
    pub crossings: Vec<usize>,
    /// Edge ids (RM1_up: the edge to curl; RM2_up: over edge, under edge).
    pub edges: Vec<u32>,
    /// RM1_up: side of the curl; RM2_up: side of the under edge the finger
    /// comes from.
    pub side: Option<Side>,
    pub pass: Option<Pass>,
}

impl MoveSpec {
    pub fn rm1_down(c: usize) -> Self {
        MoveSpec { kind: MoveKind::Rm1Down, crossings: vec![c], edges: vec![], side: None, pass: None }
    }

    pub fn rm1_up(e: u32, pass: Pass, side: Side) -> Self {
        MoveSpec { kind: MoveKind::Rm1Up, crossings: vec![], edges: vec![e], side: Some(side), pass: Some(pass) }
    }

    pub fn rm2_down(c1: usize, c2: usize) -> Self {
        MoveSpec { kind: MoveKind::Rm2Down, crossings: vec![c1, c2], edges: vec![], side: None, pass: None }
    }

    pub fn rm2_up(over: u32, under: u32, side: Option<Side>) -> Self {
        MoveSpec { kind: MoveKind::Rm2Up, crossings: vec![], edges: vec![over, under], side, pass: None }
    }

    pub fn rm3(c1: usize, c2: usize, c3: usize) -> Self {
        MoveSpec { kind: MoveKind::Rm3, crossings: vec![c1, c2, c3], edges: vec![], side: None, pass: None }
    }

    fn site(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        if self.crossings.is_empty() {
            format!("edge {}", join(self.edges.iter().map(u32::to_string).collect()))
        } else {
            format!("crossing {}", join(self.crossings.iter().map(usize::to_string).collect()))
        }
    }
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.kind, self.site())?;
        if let Some(p) = self.pass {
            f.write_str(if p == Pass::Under { " under" } else { " over" })?;
        }
        if let Some(s) = self.side {
            f.write_str(if s == Side::Left { " left" } else { " right" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("line {line}: {msg}")]
    Script { line: usize, msg: String },
    #[error("{kind} @ {site}: expected {expected}, found {actual}")]
    PatternNotFound { kind: MoveKind, site: String, expected: String, actual: String },
    #[error("move {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<MoveError>,
    },
}

impl FromStr for MoveSpec {
    type Err = String;

    /// `RM2_down @ crossing 4,7`, `RM1_up @ edge 3 over left`,
    /// `RM2_up @ edge 2,5 right`, `RM3 @ crossing 1,2,3`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, site) = s.split_once('@').ok_or("expected '<move> @ <site>'")?;
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "rm1_up" => MoveKind::Rm1Up,
            "rm1_down" => MoveKind::Rm1Down,
            "rm2_up" => MoveKind::Rm2Up,
            "rm2_down" => MoveKind::Rm2Down,
            "rm3" => MoveKind::Rm3,
            other => return Err(format!("unknown move '{other}'")),
        };
        let mut words = site.split_whitespace();
        let what = words.next().ok_or("missing site")?;
        let nums: Vec<usize> = words
            .next()
            .ok_or("missing site ids")?
            .split(',')
            .map(|n| n.trim().parse::<usize>().map_err(|_| format!("bad id '{n}'")))
            .collect::<Result<_, _>>()?;
        let mut m = MoveSpec { kind, crossings: vec![], edges: vec![], side: None, pass: None };
        let (want_what, want_n) = match kind {
            MoveKind::Rm1Up => ("edge", 1),
            MoveKind::Rm1Down => ("crossing", 1),
            MoveKind::Rm2Up => ("edge", 2),
            MoveKind::Rm2Down => ("crossing", 2),
            MoveKind::Rm3 => ("crossing", 3),
        };
        if what != want_what || nums.len() != want_n {
            return Err(format!("{kind} needs '{want_what}' with {want_n} id(s)"));
        }
        if nums.contains(&0) {
            return Err("ids start at 1".into());
        }
        if want_what == "edge" {
            m.edges = nums.iter().map(|&n| n as u32).collect();
        } else {
            m.crossings = nums;
        }
        for w in words {
            match w {
                "left" => m.side = Some(Side::Left),
                "right" => m.side = Some(Side::Right),
                "over" if kind == MoveKind::Rm1Up => m.pass = Some(Pass::Over),
                "under" if kind == MoveKind::Rm1Up => m.pass = Some(Pass::Under),
                other => return Err(format!("unexpected '{other}'")),
            }
        }
        if kind == MoveKind::Rm1Up {
            m.pass.get_or_insert(Pass::Under);
            m.side.get_or_insert(Side::Right);
        }
        Ok(m)
    }
}

/// One move per line; blank lines and `%` comments are skipped.
pub fn parse_moves(text: &str) -> Result<Vec<MoveSpec>, MoveError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'))
        .map(|(i, l)| l.trim().parse().map_err(|msg| MoveError::Script { line: i + 1, msg }))
        .collect()
}

// ----- diagram geometry -----

/// Orientation and faces of a canonical diagram.
struct Geo {
    xs: Vec<[u32; 4]>,
    over_in: Vec<usize>,
    /// Both occurrences of every edge.
    occ: Vec<[(usize, usize); 2]>,
    /// Face on the left when leaving crossing `c` through slot `s`.
    face: Vec<[usize; 4]>,
    face_size: Vec<usize>,
}

impl Geo {
    fn new(d: &KnotDiagram) -> Geo {
        let (_, over_in, _) = d.oriented_relabel();
        let xs = d.crossings().to_vec();
        let m = d.edge_count() as usize;
        let mut occ = vec![[(usize::MAX, 0); 2]; m + 1];
        for (c, x) in xs.iter().enumerate() {
            for (s, &e) in x.iter().enumerate() {
                let o = &mut occ[e as usize];
                if o[0].0 == usize::MAX {
                    o[0] = (c, s);
                } else {
                    o[1] = (c, s);
                }
            }
        }
        let mut g = Geo { xs, over_in, occ, face: Vec::new(), face_size: Vec::new() };
        let mut face = vec![[usize::MAX; 4]; g.xs.len()];
        let mut sizes = Vec::new();
        for c in 0..g.xs.len() {
            for s in 0..4 {
                if face[c][s] != usize::MAX {
                    continue;
                }
                let id = sizes.len();
                let mut len = 0;
                let (mut cc, mut ss) = (c, s);
                while face[cc][ss] == usize::MAX {
                    face[cc][ss] = id;
                    len += 1;
                    let (c2, s2) = g.other(cc, ss);
                    cc = c2;
                    ss = (s2 + 3) % 4;
                }
                sizes.push(len);
            }
        }
        g.face = face;
        g.face_size = sizes;
        g
    }

    fn other(&self, c: usize, s: usize) -> (usize, usize) {
        let o = self.occ[self.xs[c][s] as usize];
        if o[0] == (c, s) {
            o[1]
        } else {
            o[0]
        }
    }

    fn is_in(&self, c: usize, s: usize) -> bool {
        s == 0 || s == self.over_in[c]
    }

    /// (tail, head) occurrences of edge `e`.
    fn ends(&self, e: u32) -> ((usize, usize), (usize, usize)) {
        let o = self.occ[e as usize];
        if self.is_in(o[0].0, o[0].1) {
            (o[1], o[0])
        } else {
            (o[0], o[1])
        }
    }

    fn left_face(&self, e: u32) -> usize {
        let (t, _) = self.ends(e);
        self.face[t.0][t.1]
    }

    fn right_face(&self, e: u32) -> usize {
        let (_, h) = self.ends(e);
        self.face[h.0][h.1]
    }
}

/// A diagram embeds in the sphere iff it has `crossings + 2` faces.
pub fn is_planar(d: &KnotDiagram) -> bool {
    d.is_trivial() || Geo::new(&d.canonical()).face_size.len() == d.crossing_count() + 2
}

// ----- moves on labelled diagrams -----

fn op(a: &Term, b: &Term) -> Term {
    Term::app(a.clone(), b.clone())
}

/// Result of a move before renumbering: crossing tuples over temporary edge
/// ids, with label candidates per id.
struct Raw {
    xs: Vec<[u32; 4]>,
    labels: HashMap<u32, Vec<Term>>,
    /// Label kept when arcs merge.
    prefer: Option<Term>,
    /// Arcs to relabel by the crossing rule unless they contain the second
    /// edge as well.
    fresh: Vec<(u32, u32)>,
}

struct Finished {
    diagram: KnotDiagram,
    /// Label per canonical edge, index `e - 1`.
    labels: Vec<Term>,
    temp_label: HashMap<u32, Term>,
}

fn pattern(m: &MoveSpec, expected: &str, actual: impl Into<String>) -> MoveError {
    MoveError::PatternNotFound { kind: m.kind, site: m.site(), expected: expected.into(), actual: actual.into() }
}

fn finish(raw: Raw, m: &MoveSpec) -> Result<Finished, MoveError> {
    if raw.xs.is_empty() {
        let mut all: Vec<Term> = Vec::new();
        let mut ids: Vec<&u32> = raw.labels.keys().collect();
        ids.sort();
        for id in ids {
            for t in &raw.labels[id] {
                if !all.contains(t) {
                    all.push(t.clone());
                }
            }
        }
        let keep = match &raw.prefer {
            Some(p) if all.contains(p) => p.clone(),
            _ => all.first().cloned().unwrap_or(Term::Const(0)),
        };
        let temp_label = raw.labels.keys().map(|&k| (k, keep.clone())).collect();
        return Ok(Finished { diagram: KnotDiagram::trivial(), labels: vec![keep], temp_label });
    }
    let mut compact: HashMap<u32, u32> = HashMap::new();
    let mut xs = raw.xs.clone();
    for x in xs.iter_mut() {
        for e in x.iter_mut() {
            let n = compact.len() as u32 + 1;
            *e = *compact.entry(*e).or_insert(n);
        }
    }
    let d = KnotDiagram::from_crossings(xs).map_err(|e| pattern(m, "a valid resulting diagram", e.to_string()))?;
    let (canon, _, relabel) = d.oriented_relabel();
    if !is_planar(&canon) {
        return Err(pattern(m, "a planar result", "a non-planar crossing structure"));
    }
    let to_canon: HashMap<u32, u32> = compact.iter().map(|(&t, &c)| (t, relabel[c as usize])).collect();
    let arcs = arcs_of(&canon);
    let mut arc_labels: Vec<Vec<Term>> = vec![Vec::new(); arcs.count];
    let mut by_edge: Vec<(u32, u32)> = to_canon.iter().map(|(&t, &c)| (c, t)).collect();
    by_edge.sort_unstable();
    for &(c, t) in &by_edge {
        let a = arcs.arc[c as usize];
        for l in raw.labels.get(&t).into_iter().flatten() {
            if !arc_labels[a].contains(l) {
                arc_labels[a].push(l.clone());
            }
        }
    }
    let mut label: Vec<Option<Term>> = arc_labels
        .iter()
        .map(|ls| match &raw.prefer {
            Some(p) if ls.contains(p) => Some(p.clone()),
            _ => ls.first().cloned(),
        })
        .collect();
    for &(e, unless) in &raw.fresh {
        let (a, b) = (arcs.arc[to_canon[&e] as usize], arcs.arc[to_canon[&unless] as usize]);
        if a != b {
            label[a] = None;
        }
    }
    // Unlabelled arcs take `L(a) ▷ L(b)` from the crossing where they start.
    loop {
        let mut progress = false;
        for x in canon.crossings() {
            let (a, b, c) = (arcs.arc[x[0] as usize], arcs.arc[x[1] as usize], arcs.arc[x[2] as usize]);
            if label[c].is_some() {
                continue;
            }
            let la = label[a].clone();
            let lb = if b == c { la.clone() } else { label[b].clone() };
            if let (Some(la), Some(lb)) = (la, lb) {
                label[c] = Some(op(&la, &lb));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let label: Vec<Term> = label
        .into_iter()
        .map(|l| l.ok_or_else(|| pattern(m, "labels for every new arc", "an arc with no determinable label")))
        .collect::<Result<_, _>>()?;
    let labels = (1..=canon.edge_count() as usize).map(|e| label[arcs.arc[e]].clone()).collect();
    let temp_label = to_canon.iter().map(|(&t, &c)| (t, label[arcs.arc[c as usize]].clone())).collect();
    Ok(Finished { diagram: canon, labels, temp_label })
}

/// Outcome of one labelled move.
struct Applied {
    fin: Finished,
    added: Vec<(Term, Term)>,
}

fn crossing_index(d: &KnotDiagram, m: &MoveSpec, k: usize) -> Result<usize, MoveError> {
    if k == 0 || k > d.crossing_count() {
        return Err(pattern(m, &format!("crossing {k} in 1..{}", d.crossing_count()), "no such crossing"));
    }
    Ok(k - 1)
}

fn edge_id(d: &KnotDiagram, m: &MoveSpec, e: u32) -> Result<u32, MoveError> {
    if e == 0 || e > d.edge_count() {
        return Err(pattern(m, &format!("edge {e} in 1..{}", d.edge_count()), "no such edge"));
    }
    Ok(e)
}

fn seed_labels(d: &KnotDiagram, labels: &[Term]) -> HashMap<u32, Vec<Term>> {
    (1..=d.edge_count()).map(|e| (e, vec![labels[e as usize - 1].clone()])).collect()
}

fn crossing_labels(x: &[u32; 4], labels: &[Term]) -> [Term; 3] {
    let l = |e: u32| labels[e as usize - 1].clone();
    [l(x[0]), l(x[1]), l(x[2])]
}

fn rm1_down(d: &KnotDiagram, labels: &[Term], m: &MoveSpec) -> Result<Applied, MoveError> {
    let c = crossing_index(d, m, m.crossings[0])?;
    let x = d.crossings()[c];
    let Some(s) = (0..4).find(|&s| x[s] == x[(s + 1) % 4]) else {
        return Err(pattern(m, "a curl (one edge on two adjacent slots)", format!("X{:?}", x)));
    };
    let [la, lb, lc] = crossing_labels(&x, labels);
    let m_edges = d.edge_count() as usize;
    let mut uf = UnionFind::new(m_edges + 1);
    let loop_e = x[s] as usize;
    for &e in &x {
        uf.union(loop_e, e as usize);
    }
    let mut raw_labels = seed_labels(d, labels);
    let mut xs = Vec::new();
    for (i, y) in d.crossings().iter().enumerate() {
        if i != c {
            xs.push(y.map(|e| uf.find(e as usize) as u32));
        }
    }
    let mut merged: HashMap<u32, Vec<Term>> = HashMap::new();
    for e in 1..=m_edges {
        let r = uf.find(e) as u32;
        merged.entry(r).or_default().extend(raw_labels.remove(&(e as u32)).unwrap_or_default());
    }
    // The over strand's arc is on the curl, so it survives.
    let (gone, kept) = if lb == la { (lc, la) } else { (la, lc) };
    let raw = Raw { xs, labels: merged, prefer: Some(lb.clone()), fresh: vec![] };
    let fin = finish(raw, m)?;
    Ok(Applied { fin, added: vec![(gone, kept)] })
}

fn rm1_up(d: &KnotDiagram, labels: &[Term], m: &MoveSpec) -> Result<Applied, MoveError> {
    let e = edge_id(d, m, m.edges[0])?;
    let tau = labels[e as usize - 1].clone();
    let mut xs = d.crossings().to_vec();
    let next = d.edge_count().max(1) + 1;
    let (l, e_out) = if d.is_trivial() { (next, e) } else { (next, next + 1) };
    if !d.is_trivial() {
        let g = Geo::new(d);
        let (_, head) = g.ends(e);
        xs[head.0][head.1] = e_out;
    }
    let pass = m.pass.unwrap_or(Pass::Under);
    let side = m.side.unwrap_or(Side::Right);
    let (tuple, new_side) = match (pass, side) {
        (Pass::Under, Side::Right) => ([e, l, l, e_out], l),
        (Pass::Under, Side::Left) => ([e, e_out, l, l], l),
        (Pass::Over, Side::Left) => ([l, e, e_out, l], e_out),
        (Pass::Over, Side::Right) => ([l, l, e_out, e], e_out),
    };
    xs.push(tuple);
    let raw = Raw { xs, labels: seed_labels(d, labels), prefer: None, fresh: vec![(new_side, e)] };
    let fin = finish(raw, m)?;
    let rho = fin.temp_label[&new_side].clone();
    Ok(Applied { fin, added: vec![(tau, rho)] })
}

fn rm2_up(d: &KnotDiagram, labels: &[Term], m: &MoveSpec) -> Result<Applied, MoveError> {
    let e = edge_id(d, m, m.edges[0])?;
    let f = edge_id(d, m, m.edges[1])?;
    if d.is_trivial() || e == f {
        return Err(pattern(m, "two distinct edges", "a single edge"));
    }
    let g = Geo::new(d);
    let sides: Vec<Side> = match m.side {
        Some(s) => vec![s],
        None => vec![Side::Left, Side::Right],
    };
    // Which side of f the shared face lies on, and on which side of e.
    let mut choice = None;
    for s in sides {
        let face = if s == Side::Left { g.left_face(f) } else { g.right_face(f) };
        if g.left_face(e) == face {
            choice = Some((s, Side::Left));
        } else if g.right_face(e) == face {
            choice = Some((s, Side::Right));
        }
        if choice.is_some() {
            break;
        }
    }
    let Some((f_side, e_side)) = choice else {
        return Err(pattern(m, "edges bounding a common face", "no shared face"));
    };
    let rho = labels[f as usize - 1].clone();
    let tau = labels[e as usize - 1].clone();
    let mut xs = d.crossings().to_vec();
    let n = d.edge_count();
    let (e2, e3, f2, f3) = (n + 1, n + 2, n + 3, n + 4);
    let (_, eh) = g.ends(e);
    let (_, fh) = g.ends(f);
    xs[eh.0][eh.1] = e3;
    xs[fh.0][fh.1] = f3;
    let (e1, f1) = (e, f);
    let (c1, c2) = match (f_side, e_side) {
        (Side::Right, Side::Left) => ([f1, e1, f2, e2], [f2, e3, f3, e2]),
        (Side::Right, Side::Right) => ([f1, e3, f2, e2], [f2, e1, f3, e2]),
        (Side::Left, Side::Right) => ([f1, e2, f2, e1], [f2, e2, f3, e3]),
        (Side::Left, Side::Left) => ([f1, e2, f2, e3], [f2, e2, f3, e1]),
    };
    xs.push(c1);
    xs.push(c2);
    let raw = Raw { xs, labels: seed_labels(d, labels), prefer: None, fresh: vec![(f3, f1)] };
    let fin = finish(raw, m)?;
    let theta = fin.temp_label[&f2].clone();
    let rho2 = fin.temp_label[&f3].clone();
    let added = vec![(theta.clone(), op(&rho, &tau)), (rho2, op(&theta, &tau))];
    Ok(Applied { fin, added })
}

fn rm2_down(d: &KnotDiagram, labels: &[Term], m: &MoveSpec) -> Result<Applied, MoveError> {
    let k1 = crossing_index(d, m, m.crossings[0])?;
    let k2 = crossing_index(d, m, m.crossings[1])?;
    let (x1, x2) = (d.crossings()[k1], d.crossings()[k2]);
    if k1 == k2 {
        return Err(pattern(m, "two distinct crossings", "the same crossing twice"));
    }
    let g = Geo::new(d);
    // An over edge and an under edge joining the two crossings and bounding
    // a bigon.
    let joins = |odd: bool| -> Vec<u32> {
        let mut v: Vec<u32> = (0..4)
            .filter(|s| (s % 2 == 1) == odd)
            .map(|s| x1[s])
            .filter(|e| (0..4).any(|t| (t % 2 == 1) == odd && x2[t] == *e))
            .collect();
        v.dedup();
        v
    };
    let mut found = None;
    for &ov in &joins(true) {
        for &un in &joins(false) {
            let fo = [g.left_face(ov), g.right_face(ov)];
            let fu = [g.left_face(un), g.right_face(un)];
            if fo.iter().any(|f| fu.contains(f) && g.face_size[*f] == 2) {
                found = Some((ov, un));
            }
        }
    }
    let Some((ov, un)) = found else {
        return Err(pattern(
            m,
            "a bigon: one strand over at both crossings, the other under at both",
            format!("X{:?} and X{:?}", x1, x2),
        ));
    };
    // Under strand order: first crossing is where `un` leaves.
    let (ut, _) = g.ends(un);
    let first = ut.0;
    let xf = d.crossings()[first];
    let second = if first == k1 { k2 } else { k1 };
    let xs2 = d.crossings()[second];
    let l = |e: u32| labels[e as usize - 1].clone();
    let rho = l(xf[0]);
    let theta = l(xs2[2]);
    let me = d.edge_count() as usize;
    let mut uf = UnionFind::new(me + 1);
    for x in [x1, x2] {
        let so = (0..4).find(|&s| x[s] == ov).expect("over edge present");
        uf.union(ov as usize, x[(so + 2) % 4] as usize);
        let su = (0..4).find(|&s| x[s] == un).expect("under edge present");
        uf.union(un as usize, x[(su + 2) % 4] as usize);
    }
    let mut xs = Vec::new();
    for (i, y) in d.crossings().iter().enumerate() {
        if i != k1 && i != k2 {
            xs.push(y.map(|e| uf.find(e as usize) as u32));
        }
    }
    let mut merged: HashMap<u32, Vec<Term>> = HashMap::new();
    for e in 1..=me {
        merged.entry(uf.find(e) as u32).or_default().push(labels[e - 1].clone());
    }
    // The middle under arc disappears without a merge.
    let mid = l(un);
    for v in merged.values_mut() {
        if v.len() > 1 {
            v.retain(|t| *t != mid || t == &rho || t == &theta);
        }
    }
    let raw = Raw { xs, labels: merged, prefer: Some(rho.clone()), fresh: vec![] };
    let fin = finish(raw, m)?;
    Ok(Applied { fin, added: vec![(theta, rho)] })
}

fn rm3(d: &KnotDiagram, labels: &[Term], m: &MoveSpec) -> Result<Applied, MoveError> {
    let mut ks = Vec::new();
    for &k in &m.crossings {
        ks.push(crossing_index(d, m, k)?);
    }
    let mut sorted = ks.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 3 {
        return Err(pattern(m, "three distinct crossings", "repeated crossings"));
    }
    let g = Geo::new(d);
    // A triangular face through exactly these crossings.
    let mut tri = None;
    for (f, &size) in g.face_size.iter().enumerate() {
        if size != 3 {
            continue;
        }
        let darts: Vec<(usize, usize)> =
            (0..g.xs.len()).flat_map(|c| (0..4).map(move |s| (c, s))).filter(|&(c, s)| g.face[c][s] == f).collect();
        let mut cs: Vec<usize> = darts.iter().map(|d| d.0).collect();
        cs.sort_unstable();
        if cs == sorted {
            tri = Some(darts);
            break;
        }
    }
    let Some(darts) = tri else {
        return Err(pattern(m, "a triangular face through the three crossings", "no such face"));
    };
    struct Strand {
        p: (usize, usize),
        q: (usize, usize),
        over: (bool, bool),
    }
    let mut strands = Vec::new();
    for &(c, s) in &darts {
        let e = g.xs[c][s];
        let (t, h) = g.ends(e);
        strands.push(Strand { p: t, q: h, over: (t.1 % 2 == 1, h.1 % 2 == 1) });
    }
    let top = strands.iter().position(|s| s.over == (true, true));
    let bottom = strands.iter().position(|s| s.over == (false, false));
    let (Some(top), Some(bottom)) = (top, bottom) else {
        let kinds: Vec<String> = strands.iter().map(|s| format!("{:?}", s.over)).collect();
        return Err(pattern(m, "one strand over at both crossings and one under at both", kinds.join(" ")));
    };
    let middle = 3 - top - bottom;
    let l = |e: u32| labels[e as usize - 1].clone();
    let theta = l(g.xs[strands[top].p.0][strands[top].p.1]);
    // The middle strand passes under the top one at `x`.
    let ms = &strands[middle];
    let x = if ms.over.0 { ms.q.0 } else { ms.p.0 };
    let tau = l(g.xs[x][0]);
    let bs = &strands[bottom];
    let rho = l(g.xs[bs.p.0][(bs.p.1 + 2) % 4]);
    let old = d.crossings().to_vec();
    let mut xs = old.clone();
    let mut next = d.edge_count() + 1;
    let mut mids = Vec::new();
    for s in &strands {
        let (p, q) = (s.p, s.q);
        let s_in = old[p.0][(p.1 + 2) % 4];
        let s_out = old[q.0][(q.1 + 2) % 4];
        let nm = next;
        next += 1;
        mids.push(nm);
        xs[p.0][(p.1 + 2) % 4] = nm;
        xs[p.0][p.1] = s_out;
        xs[q.0][q.1] = s_in;
        xs[q.0][(q.1 + 2) % 4] = nm;
    }
    let mut raw_labels = seed_labels(d, labels);
    for &(c, s) in &darts {
        raw_labels.remove(&g.xs[c][s]);
    }
    let raw = Raw { xs, labels: raw_labels, prefer: None, fresh: vec![] };
    let fin = finish(raw, m)?;
    let lhs = op(&op(&rho, &tau), &theta);
    let rhs = op(&op(&rho, &theta), &op(&tau, &theta));
    Ok(Applied { fin, added: vec![(lhs, rhs)] })
}

fn apply_labelled(d: &KnotDiagram, labels: &[Term], m: &MoveSpec) -> Result<Applied, MoveError> {
    match m.kind {
        MoveKind::Rm1Down => rm1_down(d, labels, m),
        MoveKind::Rm1Up => rm1_up(d, labels, m),
        MoveKind::Rm2Up => rm2_up(d, labels, m),
        MoveKind::Rm2Down => rm2_down(d, labels, m),
        MoveKind::Rm3 => rm3(d, labels, m),
    }
}

/// Applies one move to the canonical form of `d`.
pub fn apply_move(d: &KnotDiagram, m: &MoveSpec) -> Result<KnotDiagram, MoveError> {
    let d = d.canonical();
    let labels = vec![Term::Const(0); d.edge_count() as usize];
    Ok(apply_labelled(&d, &labels, m)?.fin.diagram)
}

// ----- traces -----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Move that produced this diagram (`None` for the first).
    pub applied: Option<MoveSpec>,
    pub diagram: KnotDiagram,
    /// Label of every edge, index `e - 1`.
    pub labels: Vec<Term>,
    /// The whole equation set E at this diagram, relations first.
    pub equations: Vec<(Term, Term)>,
}

impl TraceStep {
    /// Distinct arc labels in arc order.
    pub fn arc_labels(&self) -> Vec<Term> {
        let arcs = arcs_of(&self.diagram);
        let mut out: Vec<Option<Term>> = vec![None; arcs.count];
        for e in 1..=self.diagram.edge_count() as usize {
            out[arcs.arc[e]].get_or_insert_with(|| self.labels[e - 1].clone());
        }
        out.into_iter().flatten().collect()
    }

    /// `L(a) ▷ L(b) = L(c)` per crossing.
    pub fn crossing_equations(&self) -> Vec<(Term, Term)> {
        self.diagram
            .crossings()
            .iter()
            .map(|x| {
                let [a, b, c] = crossing_labels(x, &self.labels);
                (op(&a, &b), c)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledTrace {
    /// Presentation of the first diagram; labels are terms over its
    /// generators.
    pub presentation: Presentation,
    pub steps: Vec<TraceStep>,
}

fn relation_equations(p: &Presentation) -> Vec<(Term, Term)> {
    p.relations
        .iter()
        .map(|r| (op(&Term::Const(r.a as u32), &Term::Const(r.b as u32)), Term::Const(r.c as u32)))
        .collect()
}

/// Runs the moves from `d0`, building labels and equation sets.
pub fn trace_equations(d0: &KnotDiagram, moves: &[MoveSpec]) -> Result<LabelledTrace, MoveError> {
    let d = d0.canonical();
    let p = presentation_of(&d);
    let arcs = arcs_of(&d);
    let labels: Vec<Term> = (1..=d.edge_count() as usize).map(|e| Term::Const(arcs.arc[e] as u32)).collect();
    let mut steps = vec![TraceStep { applied: None, diagram: d, labels, equations: relation_equations(&p) }];
    for (i, m) in moves.iter().enumerate() {
        let cur = steps.last().expect("nonempty");
        let a = apply_labelled(&cur.diagram, &cur.labels, m)
            .map_err(|e| MoveError::Step { index: i + 1, source: Box::new(e) })?;
        let mut equations = cur.equations.clone();
        equations.extend(a.added);
        steps.push(TraceStep { applied: Some(m.clone()), diagram: a.fin.diagram, labels: a.fin.labels, equations });
    }
    Ok(LabelledTrace { presentation: p, steps })
}

impl LabelledTrace {
    pub fn final_step(&self) -> &TraceStep {
        self.steps.last().expect("a trace has at least one diagram")
    }

    /// Equations of the last diagram beyond the original relations.
    pub fn added_equations(&self) -> Vec<(Term, Term)> {
        self.final_step().equations[self.presentation.relations.len()..].to_vec()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = &self.presentation.generators;
        let eq = |(l, r): &(Term, Term)| format!("{} = {}", l.display(names), r.display(names));
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| {
                serde_json::json!({
                    "move": s.applied.as_ref().map(|m| m.to_string()),
                    "diagram": s.diagram.to_pd(),
                    "labels": s.arc_labels().iter().map(|t| t.display(names).to_string()).collect::<Vec<_>>(),
                    "edge_labels": s.labels.iter().map(|t| t.display(names).to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "generators": names,
            "diagrams": steps,
            "equations": self.final_step().equations.iter().map(eq).collect::<Vec<_>>(),
            "equation_counts": self.steps.iter().map(|s| s.equations.len()).collect::<Vec<_>>(),
        })
    }
}

// ----- property checks -----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivation {
    /// Sides are the same term.
    Trivial,
    Proved,
    /// Not derived within the budget; not a refutation.
    Unverified,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceReport {
    pub property1: bool,
    pub property2: bool,
    /// Per diagram, per crossing.
    pub property3: Vec<Vec<Derivation>>,
    pub property4: bool,
    pub problems: Vec<String>,
}

impl TraceReport {
    pub fn property3_all_derived(&self) -> bool {
        self.property3.iter().flatten().all(|d| *d != Derivation::Unverified)
    }

    pub fn all_hold(&self) -> bool {
        self.property1 && self.property2 && self.property3_all_derived() && self.property4
    }
}

fn is_q1_instance(l: &Term, r: &Term) -> bool {
    matches!(r, Term::App(a, b) if a == b && **a == *l) || matches!(l, Term::App(a, b) if a == b && **a == *r)
}

fn is_q2_instance(l: &Term, r: &Term) -> bool {
    let one = |s: &Term, t: &Term| match s {
        Term::App(xy, y) => matches!(&**xy, Term::App(x, y2) if y2 == y && **x == *t),
        _ => false,
    };
    one(l, r) || one(r, l)
}

fn is_q3_instance(l: &Term, r: &Term) -> bool {
    // (x ▷ y) ▷ z = (x ▷ z) ▷ (y ▷ z)
    let one = |s: &Term, t: &Term| {
        let (Term::App(xy, z), Term::App(xz, yz)) = (s, t) else { return false };
        let (Term::App(x, y), Term::App(x2, z2), Term::App(y2, z3)) = (&**xy, &**xz, &**yz) else { return false };
        x == x2 && y == y2 && z == z2 && z == z3
    };
    one(l, r) || one(r, l)
}

/// Checks the added equations of step `i + 1` against the rule of its move.
fn justified(prev: &TraceStep, next: &TraceStep, added: &[(Term, Term)]) -> Result<(), String> {
    let m = next.applied.as_ref().ok_or("missing move")?;
    let same = |a: &(Term, Term), b: &Term, c: &Term| (a.0 == *b && a.1 == *c) || (a.0 == *c && a.1 == *b);
    let rel = |k: usize| -> Result<[Term; 3], String> {
        let x = prev.diagram.crossings().get(k.wrapping_sub(1)).ok_or("site crossing missing")?;
        Ok(crossing_labels(x, &prev.labels))
    };
    let ok = match m.kind {
        MoveKind::Rm1Up => added.len() == 1 && (added[0].0 == added[0].1 || is_q1_instance(&added[0].0, &added[0].1)),
        MoveKind::Rm2Up => {
            added.len() == 2 && added.iter().all(|(l, r)| l == r || is_q2_instance(l, r))
        }
        MoveKind::Rm3 => added.len() == 1 && is_q3_instance(&added[0].0, &added[0].1),
        MoveKind::Rm1Down => {
            let [a, b, c] = rel(m.crossings[0])?;
            added.len() == 1 && (b == a || b == c) && same(&added[0], &a, &c)
        }
        MoveKind::Rm2Down => {
            let r1 = rel(m.crossings[0])?;
            let r2 = rel(m.crossings[1])?;
            // Under strand: r ▷ t = u then u ▷ t = w, in either order.
            let chain = |p: &[Term; 3], q: &[Term; 3]| p[2] == q[0] && p[1] == q[1] && same(&added[0], &p[0], &q[2]);
            added.len() == 1 && (chain(&r1, &r2) || chain(&r2, &r1))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(format!("equations added by {m} do not follow its rule"))
    }
}

/// Properties 1, 2 and 4 structurally; property 3 with the prover under
/// `budget_per_crossing` each.
pub fn check_trace_properties(
    t: &LabelledTrace,
    axioms: AxiomSet,
    limits: &ProverLimits,
    budget_per_crossing: std::time::Duration,
    budget: &Budget,
) -> TraceReport {
    let mut problems = Vec::new();
    let p = &t.presentation;
    let rels = relation_equations(p);
    let first = &t.steps[0];
    let arcs = arcs_of(&first.diagram);
    let mut p1 = first.equations == rels
        && (1..=first.diagram.edge_count() as usize).all(|e| first.labels[e - 1] == Term::Const(arcs.arc[e] as u32));
    if !p1 {
        problems.push("first diagram: E is not the relation set or labels are not the generators".into());
    }
    let mut p2 = true;
    let mut p4 = true;
    for i in 0..t.steps.len().saturating_sub(1) {
        let (a, b) = (&t.steps[i], &t.steps[i + 1]);
        if !b.equations.starts_with(&a.equations) {
            p1 = false;
            problems.push(format!("step {}: E does not extend the previous set", i + 1));
            continue;
        }
        let added = &b.equations[a.equations.len()..];
        if let Err(e) = justified(a, b, added) {
            p2 = false;
            problems.push(format!("step {}: {e}", i + 1));
        }
        if arcs_of(&a.diagram).count > 1 {
            let survivors = b.arc_labels();
            let removed: Vec<[Term; 3]> = match &b.applied {
                Some(m) if matches!(m.kind, MoveKind::Rm1Down | MoveKind::Rm2Down | MoveKind::Rm3) => {
                    if m.kind == MoveKind::Rm3 {
                        a.diagram.crossings().iter().map(|x| crossing_labels(x, &a.labels)).collect()
                    } else {
                        m.crossings
                            .iter()
                            .filter_map(|&k| a.diagram.crossings().get(k - 1))
                            .map(|x| crossing_labels(x, &a.labels))
                            .collect()
                    }
                }
                _ => Vec::new(),
            };
            for gone in a.arc_labels().into_iter().filter(|l| !survivors.contains(l)) {
                let equated = b.equations.iter().any(|(l, r)| {
                    (*l == gone && survivors.contains(r)) || (*r == gone && survivors.contains(l))
                });
                // Otherwise it must be the product of surviving labels at a
                // crossing of the previous diagram.
                let expressed = removed.iter().any(|[x, y, z]| {
                    survivors.contains(y)
                        && ((*z == gone && survivors.contains(x)) || (*x == gone && survivors.contains(z)))
                });
                if !equated && !expressed {
                    p4 = false;
                    problems.push(format!("step {}: label {} vanished unaccounted", i + 1, gone.display(&p.generators)));
                }
            }
        }
    }
    let mut p3 = Vec::new();
    for (i, s) in t.steps.iter().enumerate() {
        let hyps: Vec<(Term, Term)> = s.equations[rels.len().min(s.equations.len())..].to_vec();
        let mut row = Vec::new();
        for (k, goal) in s.crossing_equations().into_iter().enumerate() {
            if goal.0 == goal.1 {
                row.push(Derivation::Trivial);
                continue;
            }
            let b = budget.child(Some(budget_per_crossing));
            let r = saturate_goals(p, axioms, &hyps, std::slice::from_ref(&goal), limits, &b);
            let ok = r.status == ProofStatus::Proved
                && r.proof.as_ref().is_some_and(|pr| check_proof_goals(pr, p, axioms, &hyps, std::slice::from_ref(&goal)).is_ok());
            if !ok {
                problems.push(format!("diagram {}: crossing {} not derived", i + 1, k + 1));
            }
            row.push(if ok { Derivation::Proved } else { Derivation::Unverified });
        }
        p3.push(row);
    }
    TraceReport { property1: p1, property2: p2, property3: p3, property4: p4, problems }
}

/// Tries to prove the presentation's chain goal from the final equation set.
pub fn prove_from_final(t: &LabelledTrace, axioms: AxiomSet, limits: &ProverLimits, budget: &Budget) -> ProofResult {
    saturate_with(&t.presentation, axioms, &t.added_equations(), limits, budget)
}

/// Minimal countermodels for an axiom subset: a model shows the chain goal
/// does not follow from those axioms, so moves of the matching kinds alone
/// cannot untangle the diagram.
pub fn subset_axiom_refute(p: &Presentation, axioms: AxiomSet, max_size: usize, budget: &Budget) -> SearchOutcome {
    find_minimal_countermodel_with(p, axioms, max_size, budget)
}

/// Axiom `k` corresponds to moves of type `k`.
pub fn axioms_for_moves(kinds: &[MoveKind]) -> AxiomSet {
    let mut v = Vec::new();
    for k in kinds {
        v.push(match k {
            MoveKind::Rm1Up | MoveKind::Rm1Down => Axiom::Q1,
            MoveKind::Rm2Up | MoveKind::Rm2Down => Axiom::Q2,
            MoveKind::Rm3 => Axiom::Q3,
        });
    }
    AxiomSet::new(&v)
}
