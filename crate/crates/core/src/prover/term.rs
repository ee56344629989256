//! Terms over one binary operation, hash-consed for the saturation engine,
//! plus a plain tree form used in proofs and by the replay checker.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

pub type TermId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Var(u32),
    Const(u32),
    App(TermId, TermId),
}

#[derive(Debug, Clone)]
struct Meta {
    size: u32,
    depth: u32,
    /// Sorted `(variable, occurrences)` pairs.
    vars: Box<[(u32, u32)]>,
}

/// Interning table: structurally equal terms share one id.
#[derive(Debug, Default)]
pub struct TermBank {
    nodes: Vec<Node>,
    meta: Vec<Meta>,
    map: FxHashMap<Node, TermId>,
}

impl TermBank {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, n: Node) -> TermId {
        if let Some(&id) = self.map.get(&n) {
            return id;
        }
        let meta = match n {
            Node::Var(v) => Meta { size: 1, depth: 0, vars: vec![(v, 1)].into() },
            Node::Const(_) => Meta { size: 1, depth: 0, vars: Box::new([]) },
            Node::App(a, b) => {
                let (ma, mb) = (&self.meta[a as usize], &self.meta[b as usize]);
                Meta {
                    size: ma.size + mb.size + 1,
                    depth: ma.depth.max(mb.depth) + 1,
                    vars: merge_counts(&ma.vars, &mb.vars),
                }
            }
        };
        let id = self.nodes.len() as TermId;
        self.nodes.push(n);
        self.meta.push(meta);
        self.map.insert(n, id);
        id
    }

    pub fn var(&mut self, v: u32) -> TermId {
        self.intern(Node::Var(v))
    }

    pub fn constant(&mut self, c: u32) -> TermId {
        self.intern(Node::Const(c))
    }

    pub fn app(&mut self, a: TermId, b: TermId) -> TermId {
        self.intern(Node::App(a, b))
    }

    pub fn node(&self, t: TermId) -> Node {
        self.nodes[t as usize]
    }

    pub fn size(&self, t: TermId) -> u32 {
        self.meta[t as usize].size
    }

    pub fn depth(&self, t: TermId) -> u32 {
        self.meta[t as usize].depth
    }

    pub fn vars(&self, t: TermId) -> &[(u32, u32)] {
        &self.meta[t as usize].vars
    }

    pub fn is_ground(&self, t: TermId) -> bool {
        self.meta[t as usize].vars.is_empty()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn subterm(&self, mut t: TermId, pos: Pos) -> TermId {
        for i in 0..pos.len() {
            match self.node(t) {
                Node::App(a, b) => t = if pos.at(i) == 0 { a } else { b },
                _ => panic!("position outside term"),
            }
        }
        t
    }

    /// Replaces the subterm at `pos` by `r`.
    pub fn replace(&mut self, t: TermId, pos: Pos, r: TermId) -> TermId {
        self.replace_from(t, pos, 0, r)
    }

    fn replace_from(&mut self, t: TermId, pos: Pos, i: usize, r: TermId) -> TermId {
        if i == pos.len() {
            return r;
        }
        match self.node(t) {
            Node::App(a, b) => {
                if pos.at(i) == 0 {
                    let a2 = self.replace_from(a, pos, i + 1, r);
                    self.app(a2, b)
                } else {
                    let b2 = self.replace_from(b, pos, i + 1, r);
                    self.app(a, b2)
                }
            }
            _ => panic!("position outside term"),
        }
    }

    pub fn to_tree(&self, t: TermId) -> Term {
        match self.node(t) {
            Node::Var(v) => Term::Var(v),
            Node::Const(c) => Term::Const(c),
            Node::App(a, b) => Term::app(self.to_tree(a), self.to_tree(b)),
        }
    }

    pub fn from_tree(&mut self, t: &Term) -> TermId {
        match t {
            Term::Var(v) => self.var(*v),
            Term::Const(c) => self.constant(*c),
            Term::App(a, b) => {
                let (a, b) = (self.from_tree(a), self.from_tree(b));
                self.app(a, b)
            }
        }
    }

    /// Renames variables to 0, 1, ... in order of first occurrence across
    /// the given terms.
    pub fn rename_canonical(&mut self, ts: &[TermId]) -> Vec<TermId> {
        let mut map: Vec<(u32, u32)> = Vec::new();
        ts.iter().map(|&t| self.rename_rec(t, &mut map)).collect()
    }

    fn rename_rec(&mut self, t: TermId, map: &mut Vec<(u32, u32)>) -> TermId {
        if self.is_ground(t) {
            return t;
        }
        match self.node(t) {
            Node::Var(v) => {
                let nv = match map.iter().find(|(o, _)| *o == v) {
                    Some(&(_, n)) => n,
                    None => {
                        let n = map.len() as u32;
                        map.push((v, n));
                        n
                    }
                };
                self.var(nv)
            }
            Node::Const(_) => t,
            Node::App(a, b) => {
                let a2 = self.rename_rec(a, map);
                let b2 = self.rename_rec(b, map);
                self.app(a2, b2)
            }
        }
    }
}

fn merge_counts(a: &[(u32, u32)], b: &[(u32, u32)]) -> Box<[(u32, u32)]> {
    if b.is_empty() {
        return a.into();
    }
    if a.is_empty() {
        return b.into();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out.into()
}

/// A position as a path of child choices (0 = left, 1 = right), at most 64
/// deep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Pos {
    len: u8,
    bits: u64,
}

impl Pos {
    pub const ROOT: Pos = Pos { len: 0, bits: 0 };
    pub const MAX_DEPTH: usize = 64;

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn at(self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn child(self, c: u8) -> Pos {
        debug_assert!((self.len as usize) < Self::MAX_DEPTH);
        Pos { len: self.len + 1, bits: self.bits | ((c as u64) << self.len) }
    }

    pub fn to_vec(self) -> Vec<u8> {
        (0..self.len()).map(|i| self.at(i)).collect()
    }

    pub fn from_slice(p: &[u8]) -> Pos {
        p.iter().fold(Pos::ROOT, |acc, &c| acc.child(c))
    }
}

/// A term as a plain tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(u32),
    Const(u32),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn app(a: Term, b: Term) -> Term {
        Term::App(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> TermDisplay<'a> {
        TermDisplay { t: self, names }
    }
}

/// Variable names in the order `x, y, z, u, w, v5, v6, ...`.
pub fn var_name(v: u32) -> String {
    match v {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "u".into(),
        4 => "w".into(),
        _ => format!("v{v}"),
    }
}

pub struct TermDisplay<'a> {
    t: &'a Term,
    names: &'a [String],
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.t, self.names, false)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, names: &[String], paren: bool) -> fmt::Result {
    match t {
        Term::Var(v) => f.write_str(&var_name(*v)),
        Term::Const(c) => match names.get(*c as usize) {
            Some(n) => f.write_str(n),
            None => write!(f, "c{c}"),
        },
        Term::App(a, b) => {
            if paren {
                f.write_str("(")?;
            }
            write_term(f, a, names, true)?;
            f.write_str(" * ")?;
            write_term(f, b, names, true)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

/// Parses the display syntax back into a term: `*` is left-associative,
/// names found in `names` are constants and single-letter names or `v<k>`
/// are variables.
pub fn parse_term(s: &str, names: &[String]) -> Result<Term, String> {
    let toks = tokenize(s)?;
    let mut i = 0;
    let t = parse_expr(&toks, &mut i, names)?;
    if i != toks.len() {
        return Err(format!("trailing tokens in '{s}'"));
    }
    Ok(t)
}

fn tokenize(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if "()*".contains(c) {
            out.push(c.to_string());
            i += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(cs[st..i].iter().collect());
        } else {
            return Err(format!("unexpected '{c}'"));
        }
    }
    Ok(out)
}

fn parse_expr(toks: &[String], i: &mut usize, names: &[String]) -> Result<Term, String> {
    let mut t = parse_atom(toks, i, names)?;
    while *i < toks.len() && toks[*i] == "*" {
        *i += 1;
        let r = parse_atom(toks, i, names)?;
        t = Term::app(t, r);
    }
    Ok(t)
}

fn parse_atom(toks: &[String], i: &mut usize, names: &[String]) -> Result<Term, String> {
    let tok = toks.get(*i).ok_or("unexpected end of term")?;
    *i += 1;
    if tok == "(" {
        let t = parse_expr(toks, i, names)?;
        if toks.get(*i).map(String::as_str) != Some(")") {
            return Err("expected ')'".into());
        }
        *i += 1;
        return Ok(t);
    }
    if let Some(c) = names.iter().position(|n| n == tok) {
        return Ok(Term::Const(c as u32));
    }
    let v = match tok.as_str() {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        "u" => 3,
        "w" => 4,
        _ => tok
            .strip_prefix('v')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| format!("unknown symbol '{tok}'"))?,
    };
    Ok(Term::Var(v))
}
