//! Knot diagram and relation-list codecs.
//!
//! PD codes list, for every crossing, the four incident edge labels
//! counterclockwise starting from the incoming under-edge. Signed Gauss codes
//! list crossings along the knot as `O<label><sign>` / `U<label><sign>`.
//! Relation lists use the `c = a * b.` syntax, read as `a ▷ b = c`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("invalid diagram: {0}")]
    Invalid(String),
}

/// A single-component knot projection given by its crossings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnotDiagram {
    crossings: Vec<[u32; 4]>,
    edge_count: u32,
}

impl KnotDiagram {
    /// The zero-crossing round circle, with one formal edge.
    pub fn trivial() -> Self {
        KnotDiagram { crossings: Vec::new(), edge_count: 1 }
    }

    /// Validates the crossing records and builds a diagram.
    pub fn from_crossings(crossings: Vec<[u32; 4]>) -> Result<Self, ParseError> {
        if crossings.is_empty() {
            return Ok(Self::trivial());
        }
        let m = 2 * crossings.len() as u32;
        let mut seen = vec![0u32; m as usize + 1];
        for x in &crossings {
            for &e in x {
                if e == 0 || e > m {
                    return Err(ParseError::Invalid(format!(
                        "edge label {e} outside 1..{m} (edge_count must be twice the crossing count)"
                    )));
                }
                seen[e as usize] += 1;
            }
        }
        if let Some(e) = (1..=m).find(|&e| seen[e as usize] != 2) {
            return Err(ParseError::Invalid(format!(
                "edge {e} appears {} times, expected exactly 2",
                seen[e as usize]
            )));
        }
        let mut uf = UnionFind::new(m as usize + 1);
        for x in &crossings {
            uf.union(x[0] as usize, x[2] as usize);
            uf.union(x[1] as usize, x[3] as usize);
        }
        let root = uf.find(1);
        if (2..=m as usize).any(|e| uf.find(e) != root) {
            return Err(ParseError::Invalid(
                "diagram has more than one component".to_string(),
            ));
        }
        Ok(KnotDiagram { crossings, edge_count: m })
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> u32 {
        self.edge_count
    }

    pub fn is_trivial(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Serializes as `PD[X(i,j,k,l),...]`.
    pub fn to_pd(&self) -> String {
        let body: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X({},{},{},{})", x[0], x[1], x[2], x[3]))
            .collect();
        format!("PD[{}]", body.join(","))
    }

    /// Returns a consistently oriented copy with edges renumbered along the
    /// knot. Crossing order is kept; a tuple is rotated by two slots when its
    /// under-strand runs against the traversal. Numbering starts with the
    /// edge entering the first crossing from below.
    pub fn canonical(&self) -> KnotDiagram {
        self.oriented().0
    }

    /// Canonical copy plus, per crossing, the slot (1 or 3) where the
    /// over-strand enters.
    fn oriented(&self) -> (KnotDiagram, Vec<usize>) {
        let (d, over_in, _) = self.oriented_relabel();
        (d, over_in)
    }

    /// As `oriented`, also returning the new label of every old edge.
    pub(crate) fn oriented_relabel(&self) -> (KnotDiagram, Vec<usize>, Vec<u32>) {
        if self.crossings.is_empty() {
            return (Self::trivial(), Vec::new(), vec![0, 1]);
        }
        let mut over_in = vec![0usize; self.crossings.len()];
        let mut xs = self.crossings.clone();
        let mut slots = slot_table(&xs);
        let m = self.edge_count as usize;
        let mut order = Vec::with_capacity(m);
        let (mut c, mut s_in) = (0usize, 0usize);
        order.push(xs[0][0]);
        while order.len() < m {
            let exit = (s_in + 2) % 4;
            let e = xs[c][exit];
            order.push(e);
            let (c2, mut s2) = other_end(&slots, e, (c, exit));
            if s2 == 2 {
                // The under-strand runs against the traversal.
                let old = xs[c2];
                xs[c2].rotate_left(2);
                for (k, &f) in old.iter().enumerate() {
                    if old[..k].contains(&f) {
                        continue;
                    }
                    for p in slots.get_mut(&f).unwrap().iter_mut() {
                        if p.0 == c2 {
                            p.1 = (p.1 + 2) % 4;
                        }
                    }
                }
                s2 = 0;
            }
            if s2 % 2 == 1 {
                over_in[c2] = s2;
            }
            c = c2;
            s_in = s2;
        }
        let mut relabel = vec![0u32; m + 1];
        for (k, &e) in order.iter().enumerate() {
            relabel[e as usize] = k as u32 + 1;
        }
        let crossings = xs
            .iter()
            .map(|x| [relabel[x[0] as usize], relabel[x[1] as usize], relabel[x[2] as usize], relabel[x[3] as usize]])
            .collect();
        (KnotDiagram { crossings, edge_count: self.edge_count }, over_in, relabel)
    }

    /// Crossing signs (+1/-1) of the canonical orientation, in crossing order.
    pub fn signs(&self) -> Vec<i8> {
        self.oriented().1.iter().map(|&s| if s == 3 { 1 } else { -1 }).collect()
    }

    /// Serializes as a signed Gauss code along the canonical orientation,
    /// labelling crossings by their position in the crossing list.
    pub fn to_gauss(&self) -> String {
        if self.crossings.is_empty() {
            return String::new();
        }
        let (c, over_slot) = self.oriented();
        let m = c.edge_count;
        let signs = self.signs();
        let mut entry: Vec<(usize, bool)> = vec![(0, false); m as usize + 1];
        for (i, x) in c.crossings.iter().enumerate() {
            entry[x[0] as usize] = (i, false);
            entry[x[over_slot[i]] as usize] = (i, true);
        }
        (1..=m as usize)
            .map(|e| {
                let (i, over) = entry[e];
                let s = if signs[i] > 0 { '+' } else { '-' };
                format!("{}{}{}", if over { 'O' } else { 'U' }, i + 1, s)
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

fn slot_table(xs: &[[u32; 4]]) -> HashMap<u32, Vec<(usize, usize)>> {
    let mut t: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (c, x) in xs.iter().enumerate() {
        for (s, &e) in x.iter().enumerate() {
            t.entry(e).or_default().push((c, s));
        }
    }
    t
}

fn other_end(
    slots: &HashMap<u32, Vec<(usize, usize)>>,
    e: u32,
    here: (usize, usize),
) -> (usize, usize) {
    let v = &slots[&e];
    if v[0] == here {
        v[1]
    } else {
        v[0]
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a positive integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| ParseError::Syntax { pos: start, msg: "expected a positive integer".into() })
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }
}

/// Parses `PD[X(i,j,k,l), ...]`. Square brackets are also accepted around
/// each crossing.
pub fn parse_pd(text: &str) -> Result<KnotDiagram, ParseError> {
    let body = strip_comments(text);
    let mut cur = Cursor { s: body.as_bytes(), pos: 0 };
    cur.skip_ws();
    if !body[cur.pos..].starts_with("PD") {
        return Err(cur.err("expected 'PD['"));
    }
    cur.pos += 2;
    cur.eat(b'[')?;
    let mut crossings = Vec::new();
    if cur.peek() == Some(b']') {
        cur.pos += 1;
    } else {
        loop {
            cur.eat(b'X')?;
            let close = match cur.peek() {
                Some(b'(') => b')',
                Some(b'[') => b']',
                _ => return Err(cur.err("expected '(' after X")),
            };
            cur.pos += 1;
            let mut x = [0u32; 4];
            for (k, slot) in x.iter_mut().enumerate() {
                if k > 0 {
                    cur.eat(b',')?;
                }
                *slot = cur.number()?;
            }
            cur.eat(close)?;
            match cur.peek() {
                Some(b',') => cur.pos += 1,
                Some(b']') => {
                    cur.pos += 1;
                    crossings.push(x);
                    break;
                }
                _ => return Err(cur.err("expected ',' or ']'")),
            }
            crossings.push(x);
        }
    }
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    KnotDiagram::from_crossings(crossings)
}

/// Parses a signed Gauss code such as `O1+ U2+ O3+ U1+ O2+ U3+`.
///
/// Each crossing label must occur once as `O` and once as `U`; its sign may
/// be given on either occurrence (or both, consistently). Crossings are
/// listed in label order. Planarity of the sequence is not checked.
pub fn parse_gauss(text: &str) -> Result<KnotDiagram, ParseError> {
    let body = strip_comments(text);
    let mut entries: Vec<(bool, u32, Option<i8>, usize)> = Vec::new();
    let mut offset = 0;
    for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
        let pos = offset;
        offset += tok.len() + 1;
        if tok.is_empty() {
            continue;
        }
        let bytes = tok.as_bytes();
        let over = match bytes[0] {
            b'O' | b'o' => true,
            b'U' | b'u' => false,
            _ => return Err(ParseError::Syntax { pos, msg: format!("bad token '{tok}'") }),
        };
        let (digits, sign) = match bytes[bytes.len() - 1] {
            b'+' => (&tok[1..tok.len() - 1], Some(1)),
            b'-' => (&tok[1..tok.len() - 1], Some(-1)),
            _ => (&tok[1..], None),
        };
        let label = digits
            .parse::<u32>()
            .map_err(|_| ParseError::Syntax { pos, msg: format!("bad crossing label in '{tok}'") })?;
        entries.push((over, label, sign, pos));
    }
    if entries.is_empty() {
        return Ok(KnotDiagram::trivial());
    }
    // label -> (index, over entry, under entry, sign)
    let mut order: Vec<u32> = Vec::new();
    let mut info: HashMap<u32, (Option<usize>, Option<usize>, Option<i8>)> = HashMap::new();
    for (k, &(over, label, sign, pos)) in entries.iter().enumerate() {
        let slot = info.entry(label).or_insert_with(|| {
            order.push(label);
            (None, None, None)
        });
        let target = if over { &mut slot.0 } else { &mut slot.1 };
        if target.is_some() {
            return Err(ParseError::Syntax {
                pos,
                msg: format!("crossing {label} visited twice as {}", if over { "O" } else { "U" }),
            });
        }
        *target = Some(k);
        if let Some(s) = sign {
            if slot.2.is_some_and(|t| t != s) {
                return Err(ParseError::Syntax { pos, msg: format!("crossing {label} has conflicting signs") });
            }
            slot.2 = Some(s);
        }
    }
    order.sort_unstable();
    let len = entries.len() as u32;
    let incoming = |k: usize| if k == 0 { len } else { k as u32 };
    let outgoing = |k: usize| k as u32 + 1;
    let mut crossings = Vec::with_capacity(order.len());
    for label in order {
        let (o, u, s) = info[&label];
        let (o, u) = match (o, u) {
            (Some(o), Some(u)) => (o, u),
            _ => {
                return Err(ParseError::Invalid(format!(
                    "crossing {label} must appear once as O and once as U"
                )))
            }
        };
        let s = s.ok_or_else(|| ParseError::Invalid(format!("crossing {label} has no sign")))?;
        let x = if s > 0 {
            [incoming(u), outgoing(o), outgoing(u), incoming(o)]
        } else {
            [incoming(u), incoming(o), outgoing(u), outgoing(o)]
        };
        crossings.push(x);
    }
    KnotDiagram::from_crossings(crossings)
}

/// Generators and ground relations `a ▷ b = c` given directly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInput {
    pub generators: Vec<String>,
    /// Index triples `(a, b, c)` into `generators`, meaning `a ▷ b = c`.
    pub relations: Vec<(usize, usize, usize)>,
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// When every name is one shared prefix followed by a number (`a1`, `a2`,
/// ...), generators are put in numeric order; otherwise first appearance
/// order is kept.
fn numbered_order(r: RelationInput) -> RelationInput {
    let split = |s: &str| {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (s[..cut].to_string(), s[cut..].parse::<u64>().ok())
    };
    let keys: Vec<(String, Option<u64>)> = r.generators.iter().map(|g| split(g)).collect();
    let numbered = keys.iter().all(|(p, n)| n.is_some() && *p == keys[0].0);
    if !numbered {
        return r;
    }
    let mut perm: Vec<usize> = (0..r.generators.len()).collect();
    perm.sort_by_key(|&i| keys[i].1);
    let mut new_index = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        new_index[old] = new;
    }
    RelationInput {
        generators: perm.iter().map(|&i| r.generators[i].clone()).collect(),
        relations: r.relations.iter().map(|&(a, b, c)| (new_index[a], new_index[b], new_index[c])).collect(),
    }
}

/// Parses lines of the form `c = a * b.`. Blank lines and `%` comments are
/// skipped.
pub fn parse_relations(text: &str) -> Result<RelationInput, ParseError> {
    let mut generators: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut relations = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let bad = |msg: &str| ParseError::Line { line: ln + 1, msg: format!("{msg}: '{line}'") };
        let line = line.strip_suffix('.').ok_or_else(|| bad("missing final '.'"))?;
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("expected '='"))?;
        let (a, b) = rhs.split_once('*').ok_or_else(|| bad("expected '*'"))?;
        let names = [lhs.trim(), a.trim(), b.trim()];
        if let Some(n) = names.iter().find(|n| !is_name(n)) {
            return Err(bad(&format!("bad name '{n}'")));
        }
        let mut ids = [0usize; 3];
        for (k, n) in names.iter().enumerate() {
            ids[k] = *index.entry(n.to_string()).or_insert_with(|| {
                generators.push(n.to_string());
                generators.len() - 1
            });
        }
        relations.push((ids[1], ids[2], ids[0]));
    }
    Ok(numbered_order(RelationInput { generators, relations }))
}

/// Any input the pipeline accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnotInput {
    Diagram(KnotDiagram),
    Relations(RelationInput),
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('%'))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Detects the format from the first token: `PD[`, an `O`/`U` Gauss entry,
/// or a relation line. Empty input is the zero-crossing diagram.
pub fn parse_input(text: &str) -> Result<KnotInput, ParseError> {
    let body = strip_comments(text);
    let t = body.trim_start();
    if t.is_empty() {
        return Ok(KnotInput::Diagram(KnotDiagram::trivial()));
    }
    if t.starts_with("PD") {
        return parse_pd(&body).map(KnotInput::Diagram);
    }
    let first = t.split_whitespace().next().unwrap_or("");
    let gauss_like = first.len() >= 2
        && matches!(first.as_bytes()[0], b'O' | b'U' | b'o' | b'u')
        && first.as_bytes()[1].is_ascii_digit();
    if gauss_like {
        return parse_gauss(&body).map(KnotInput::Diagram);
    }
    parse_relations(text).map(KnotInput::Relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_pd() {
        let d = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.crossings()[1], [3, 6, 4, 1]);
    }

    #[test]
    fn empty_and_kink() {
        let d = parse_pd("PD[]").unwrap();
        assert!(d.is_trivial());
        assert_eq!(d.edge_count(), 1);
        let k = parse_pd("PD[X(1,1,2,2)]").unwrap();
        assert_eq!(k.edge_count(), 2);
        assert_eq!(parse_pd("PD[X[1,1,2,2]]").unwrap(), k);
    }

    #[test]
    fn pd_errors() {
        assert!(matches!(parse_pd("PD[X(1,2,3)]"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_pd("PD[X(1,1,1,2)]"), Err(ParseError::Invalid(_))));
        assert!(matches!(parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,7)]"), Err(ParseError::Invalid(_))));
        // two disjoint kinks
        assert!(matches!(parse_pd("PD[X(1,1,2,2),X(3,3,4,4)]"), Err(ParseError::Invalid(_))));
        let e = parse_pd("PD[X(1,2,2,x)]").unwrap_err();
        assert_eq!(e, ParseError::Syntax { pos: 11, msg: "expected a positive integer".into() });
    }

    #[test]
    fn gauss_kink_and_trefoil() {
        assert_eq!(parse_gauss("O1+ U1+").unwrap(), parse_pd("PD[X(1,1,2,2)]").unwrap());
        assert!(parse_gauss("").unwrap().is_trivial());
        let t = parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert!(parse_gauss("O1+ U2+").is_err());
        assert!(parse_gauss("O1+ O1+").is_err());
    }

    #[test]
    fn canonical_is_stable() {
        let t = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap();
        assert_eq!(t.canonical(), t);
        let k = parse_pd("PD[X(1,1,2,2)]").unwrap();
        assert_eq!(k.canonical(), k);
        // reversed under-strand at the second crossing
        let r = parse_pd("PD[X(1,4,2,5),X(4,1,3,6),X(5,2,6,3)]").unwrap();
        assert_eq!(r.canonical(), t);
    }

    #[test]
    fn gauss_round_trip() {
        let t = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap();
        let g = t.to_gauss();
        assert_eq!(parse_gauss(&g).unwrap().canonical(), t.canonical());
    }

    #[test]
    fn relations() {
        let r = parse_relations("c = a * b.").unwrap();
        assert_eq!(r.generators, vec!["c", "a", "b"]);
        assert_eq!(r.relations, vec![(1, 2, 0)]);
        let r = parse_relations("a = a * a.").unwrap();
        assert_eq!(r.generators.len(), 1);
        assert_eq!(r.relations, vec![(0, 0, 0)]);
        let e = parse_relations("a = b * c.\nbad line\n").unwrap_err();
        assert!(matches!(e, ParseError::Line { line: 2, .. }));
    }

    #[test]
    fn autodetect() {
        assert!(matches!(parse_input("% c\nPD[]"), Ok(KnotInput::Diagram(_))));
        assert!(matches!(parse_input("O1+ U1+"), Ok(KnotInput::Diagram(_))));
        assert!(matches!(parse_input("a1 = a2 * a3."), Ok(KnotInput::Relations(_))));
    }
}
