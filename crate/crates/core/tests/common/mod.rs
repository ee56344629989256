#![allow(dead_code)]

use unknot::knotio::parse_pd;
use unknot::KnotDiagram;

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

/// `(name, diagram)` for every PD entry of the knot table.
pub fn knots() -> Vec<(String, KnotDiagram)> {
    fixture("knots.txt")
        .lines()
        .filter(|l| !l.starts_with('%') && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.splitn(3, ' ');
            let name = it.next().unwrap().to_string();
            let _format = it.next().unwrap();
            (name, parse_pd(it.next().unwrap()).unwrap())
        })
        .collect()
}

pub fn knot(name: &str) -> KnotDiagram {
    knots().into_iter().find(|(n, _)| n == name).unwrap().1
}

pub mod brute {
    //! Exhaustive oracle: every table of a given order, checked directly.

    use unknot::{Axiom, AxiomSet, Presentation};

    pub fn satisfies(t: &[usize], n: usize, axioms: AxiomSet) -> bool {
        let op = |i: usize, j: usize| t[i * n + j];
        for i in 0..n {
            if axioms.contains(Axiom::Q1) && op(i, i) != i {
                return false;
            }
            for j in 0..n {
                if axioms.contains(Axiom::Q2) && op(op(i, j), j) != i {
                    return false;
                }
                if axioms.contains(Axiom::Q3) {
                    for k in 0..n {
                        if op(op(i, j), k) != op(op(i, k), op(j, k)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// All operation tables of order `n` satisfying `axioms`.
    pub fn tables(n: usize, axioms: AxiomSet) -> Vec<Vec<usize>> {
        let cells = n * n;
        let total = n.pow(cells as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let t: Vec<usize> = (0..cells)
                .map(|_| {
                    let v = c % n;
                    c /= n;
                    v
                })
                .collect();
            if satisfies(&t, n, axioms) {
                out.push(t);
            }
        }
        out
    }

    /// A table among `tables` and a generator assignment satisfying every
    /// relation with not all generators equal.
    pub fn countermodel_exists(p: &Presentation, n: usize, tables: &[Vec<usize>]) -> bool {
        let g = p.generators.len();
        if g < 2 {
            return false;
        }
        let total = n.pow(g as u32);
        tables.iter().any(|t| {
            (0..total).any(|code| {
                let mut c = code;
                let v: Vec<usize> = (0..g)
                    .map(|_| {
                        let x = c % n;
                        c /= n;
                        x
                    })
                    .collect();
                v.iter().any(|&x| x != v[0]) && p.relations.iter().all(|r| t[v[r.a] * n + v[r.b]] == v[r.c])
            })
        })
    }
}

pub fn culprit() -> unknot::Presentation {
    match unknot::parse_input(&fixture("culprit.txt")).unwrap() {
        unknot::KnotInput::Relations(r) => unknot::presentation::presentation_from_relations(&r),
        _ => panic!("culprit is a relation list"),
    }
}
