mod common;

use unknot::presentation::{arcs_of, presentation_from_relations, presentation_of};
use unknot::knotio::parse_relations;
use unknot::{parse_pd, KnotDiagram, Relation};

#[test]
fn arc_counts() {
    assert_eq!(arcs_of(&common::knot("3_1")).count, 3);
    assert_eq!(arcs_of(&KnotDiagram::trivial()).count, 1);
    assert_eq!(arcs_of(&parse_pd("PD[X(1,1,2,2)]").unwrap()).count, 1);
}

#[test]
fn trefoil_relations_form_the_cycle() {
    let p = presentation_of(&common::knot("3_1"));
    let r = |a, b, c| Relation { a, b, c };
    let cyc = unknot::Presentation {
        generators: vec!["a".into(), "b".into(), "c".into()],
        relations: vec![r(0, 1, 2), r(1, 2, 0), r(2, 0, 1)],
        goal: vec![(0, 1), (1, 2)],
    };
    assert!(p.isomorphic_to(&cyc));
    assert_eq!(p.goal, vec![(0, 1), (1, 2)]);
}

#[test]
fn degenerate_presentations() {
    let p = presentation_of(&KnotDiagram::trivial());
    assert_eq!((p.generators.len(), p.relations.len(), p.goal.len()), (1, 0, 0));
    let k = presentation_of(&parse_pd("PD[X(1,1,2,2)]").unwrap());
    assert_eq!(k.relations, vec![Relation { a: 0, b: 0, c: 0 }]);
    assert!(k.goal.is_empty());
    let single = presentation_from_relations(&parse_relations("a = a * a.").unwrap());
    assert!(single.goal.is_empty());
}

#[test]
fn culprit_text_blocks() {
    let p = common::culprit();
    assert_eq!((p.generators.len(), p.relations.len(), p.goal.len()), (10, 10, 9));
    assert!(p.assumptions_text().starts_with("a1 = a9 * a7.\n"));
    let goals = p.goals_text();
    assert!(goals.starts_with("(a1 = a2) & (a2 = a3) &\n"));
    assert!(goals.ends_with("(a9 = a10).\n"));
}

#[test]
fn structural_invariants_on_fixtures() {
    for (name, d) in common::knots() {
        let p = presentation_of(&d);
        let n = p.generators.len();
        assert_eq!(p.goal.len(), n - 1, "{name}");
        assert_eq!(p.relations.len(), d.crossing_count(), "{name}");
        assert_eq!(n, arcs_of(&d).count, "{name}");
        assert!(p.relations.iter().all(|r| r.a < n && r.b < n && r.c < n));
        // The chain links every generator to the first.
        let mut reached = vec![false; n];
        reached[0] = true;
        for &(i, j) in &p.goal {
            assert!(reached[i]);
            reached[j] = true;
        }
        assert!(reached.iter().all(|&r| r), "{name}");
    }
}
