//! Involutory quandle presentations of diagrams and relation lists.

use serde::{Deserialize, Serialize};

use crate::knotio::{KnotDiagram, RelationInput, UnionFind};

/// Ground relation `a ▷ b = c` over generator indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
    /// Consecutive equalities `g_i = g_{i+1}`.
    pub goal: Vec<(usize, usize)>,
}

/// Partition of the edges of a diagram into solid arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arcs {
    /// `arc[e]` is the arc index of edge `e` (index 0 unused).
    pub arc: Vec<usize>,
    pub count: usize,
}

/// Merges edges along each over-strand; arcs are numbered by least edge.
pub fn arcs_of(d: &KnotDiagram) -> Arcs {
    let m = d.edge_count() as usize;
    let mut uf = UnionFind::new(m + 1);
    for x in d.crossings() {
        uf.union(x[1] as usize, x[3] as usize);
    }
    let mut arc = vec![usize::MAX; m + 1];
    let mut root_id = vec![usize::MAX; m + 1];
    let mut count = 0;
    for e in 1..=m {
        let r = uf.find(e);
        if root_id[r] == usize::MAX {
            root_id[r] = count;
            count += 1;
        }
        arc[e] = root_id[r];
    }
    arc[0] = usize::MAX;
    Arcs { arc, count }
}

fn chain(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// One relation per crossing: under-in ▷ over = under-out.
pub fn presentation_of(d: &KnotDiagram) -> Presentation {
    let arcs = arcs_of(d);
    let generators = (1..=arcs.count).map(|i| format!("a{i}")).collect();
    let relations = d
        .crossings()
        .iter()
        .map(|x| Relation {
            a: arcs.arc[x[0] as usize],
            b: arcs.arc[x[1] as usize],
            c: arcs.arc[x[2] as usize],
        })
        .collect();
    Presentation { generators, relations, goal: chain(arcs.count) }
}

pub fn presentation_from_relations(r: &RelationInput) -> Presentation {
    Presentation {
        generators: r.generators.clone(),
        relations: r.relations.iter().map(|&(a, b, c)| Relation { a, b, c }).collect(),
        goal: chain(r.generators.len()),
    }
}

impl Presentation {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Relation lines `c = a * b.`, one per line.
    pub fn assumptions_text(&self) -> String {
        let g = &self.generators;
        self.relations
            .iter()
            .map(|r| format!("{} = {} * {}.\n", g[r.c], g[r.a], g[r.b]))
            .collect()
    }

    /// Goal conjunction, two equalities per line, each line but the last
    /// ending in `&`.
    pub fn goals_text(&self) -> String {
        let g = &self.generators;
        let parts: Vec<String> = self.goal.iter().map(|&(i, j)| format!("({} = {})", g[i], g[j])).collect();
        let mut out = String::new();
        for (k, pair) in parts.chunks(2).enumerate() {
            out.push_str(&pair.join(" & "));
            let last = (k + 1) * 2 >= parts.len();
            out.push_str(if last { ".\n" } else { " &\n" });
        }
        out
    }

    /// Searches for a bijection of generators mapping this relation multiset
    /// onto the other's.
    pub fn isomorphic_to(&self, other: &Presentation) -> bool {
        if self.generators.len() != other.generators.len() || self.relations.len() != other.relations.len() {
            return false;
        }
        let n = self.generators.len();
        let mut fwd = vec![usize::MAX; n];
        let mut bwd = vec![usize::MAX; n];
        let mut used = vec![false; other.relations.len()];
        iso_search(&self.relations, &other.relations, 0, &mut fwd, &mut bwd, &mut used)
    }
}

fn iso_search(
    a: &[Relation],
    b: &[Relation],
    k: usize,
    fwd: &mut Vec<usize>,
    bwd: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if k == a.len() {
        // Generators that occur in no relation can be paired freely.
        let free_a: Vec<usize> = (0..fwd.len()).filter(|&i| fwd[i] == usize::MAX).collect();
        let free_b: Vec<usize> = (0..bwd.len()).filter(|&i| bwd[i] == usize::MAX).collect();
        if free_a.len() != free_b.len() {
            return false;
        }
        for (x, y) in free_a.into_iter().zip(free_b) {
            fwd[x] = y;
            bwd[y] = x;
        }
        return true;
    }
    let r = a[k];
    for j in 0..b.len() {
        if used[j] {
            continue;
        }
        let s = b[j];
        let mut bound = Vec::new();
        let mut ok = true;
        for (x, y) in [(r.a, s.a), (r.b, s.b), (r.c, s.c)] {
            if fwd[x] == usize::MAX && bwd[y] == usize::MAX {
                fwd[x] = y;
                bwd[y] = x;
                bound.push(x);
            } else if fwd[x] != y {
                ok = false;
                break;
            }
        }
        if ok {
            used[j] = true;
            if iso_search(a, b, k + 1, fwd, bwd, used) {
                return true;
            }
            used[j] = false;
        }
        for x in bound {
            bwd[fwd[x]] = usize::MAX;
            fwd[x] = usize::MAX;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::{parse_gauss, parse_pd, parse_relations};

    fn rel(a: usize, b: usize, c: usize) -> Relation {
        Relation { a, b, c }
    }

    #[test]
    fn trefoil_matches_three_arc_presentation() {
        let d = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap();
        assert_eq!(arcs_of(&d).count, 3);
        let p = presentation_of(&d);
        let reference = Presentation {
            generators: vec!["a".into(), "b".into(), "c".into()],
            relations: vec![rel(0, 1, 2), rel(1, 2, 0), rel(2, 0, 1)],
            goal: chain(3),
        };
        assert!(p.isomorphic_to(&reference));
        assert_eq!(p.goal, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn gauss_and_pd_agree() {
        let a = presentation_of(&parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap());
        let b = presentation_of(&parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap());
        assert_eq!(b.generators.len(), 3);
        assert!(a.isomorphic_to(&b));
    }

    #[test]
    fn degenerate_diagrams() {
        let p = presentation_of(&KnotDiagram::trivial());
        assert_eq!(p.generators, vec!["a1"]);
        assert!(p.relations.is_empty() && p.goal.is_empty());
        let k = presentation_of(&parse_pd("PD[X(1,1,2,2)]").unwrap());
        assert_eq!(k.generators.len(), 1);
        assert_eq!(k.relations, vec![rel(0, 0, 0)]);
        assert!(k.goal.is_empty());
    }

    #[test]
    fn from_relations_and_text() {
        let r = parse_relations("a3 = a1 * a2.\na1 = a2 * a3.\na2 = a3 * a1.\n").unwrap();
        let p = presentation_from_relations(&r);
        assert_eq!(p.goal, vec![(0, 1), (1, 2)]);
        assert_eq!(p.assumptions_text(), "a3 = a1 * a2.\na1 = a2 * a3.\na2 = a3 * a1.\n");
        assert_eq!(p.generators, vec!["a1", "a2", "a3"]);
        assert_eq!(p.goals_text(), "(a1 = a2) & (a2 = a3).\n");
    }

    #[test]
    fn isomorphism_rejects_different_shape() {
        let t = Presentation { generators: vec!["x".into(); 3], relations: vec![rel(0, 1, 2), rel(1, 2, 0), rel(2, 0, 1)], goal: chain(3) };
        let u = Presentation { generators: vec!["x".into(); 3], relations: vec![rel(0, 1, 2), rel(1, 2, 0), rel(2, 1, 0)], goal: chain(3) };
        assert!(!t.isomorphic_to(&u));
    }
}
