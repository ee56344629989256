mod common;

use proptest::prelude::*;
use unknot::knotio::{parse_gauss, parse_relations};
use unknot::presentation::{presentation_from_relations, presentation_of};
use unknot::{parse_input, parse_pd, KnotDiagram, KnotInput, ParseError};

#[test]
fn pd_examples() {
    let d = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap();
    assert_eq!((d.crossing_count(), d.edge_count()), (3, 6));
    let p = presentation_of(&d);
    assert_eq!(p.generators.len(), 3);
    assert!(parse_pd("PD[]").unwrap().is_trivial());
    let k = parse_pd("PD[X(1,1,2,2)]").unwrap();
    assert_eq!((k.crossing_count(), k.edge_count()), (1, 2));
    assert_eq!(presentation_of(&k).generators.len(), 1);
}

#[test]
fn gauss_examples() {
    let d = parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
    assert_eq!(d.crossing_count(), 3);
    let p = presentation_of(&d);
    assert!(p.isomorphic_to(&presentation_of(&common::knot("3_1"))));
    assert!(parse_gauss("").unwrap().is_trivial());
    let k = parse_gauss("O1+ U1+").unwrap();
    assert_eq!(k.crossing_count(), 1);
    assert_eq!(presentation_of(&k).generators.len(), 1);
}

#[test]
fn relation_examples() {
    let r = parse_relations(&common::fixture("culprit.txt")).unwrap();
    assert_eq!(r.generators, (1..=10).map(|i| format!("a{i}")).collect::<Vec<_>>());
    assert_eq!(r.relations.len(), 10);
    let r = parse_relations("c = a * b.").unwrap();
    assert_eq!(r.generators, ["c", "a", "b"]);
    assert_eq!(r.relations, vec![(1, 2, 0)]);
    let r = parse_relations("a = a * a.").unwrap();
    assert_eq!((r.generators.len(), r.relations.clone()), (1, vec![(0, 0, 0)]));
    assert_eq!(presentation_from_relations(&r).goal, vec![]);
}

#[test]
fn errors_carry_positions() {
    match parse_pd("PD[X(1,2,3)]") {
        Err(ParseError::Syntax { pos, .. }) => assert!(pos > 0),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_pd("PD[X(1,1,1,2)]"), Err(ParseError::Invalid(_))));
    // Two components: a Hopf-like pair of loops.
    assert!(parse_pd("PD[X(1,3,2,4),X(3,1,4,2)]").is_err());
    match parse_relations("a1 = a2 * a3.\na1 = a2 a3.") {
        Err(ParseError::Line { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn input_detection() {
    assert!(matches!(parse_input("PD[X(1,1,2,2)]").unwrap(), KnotInput::Diagram(_)));
    assert!(matches!(parse_input("O1+ U1+").unwrap(), KnotInput::Diagram(_)));
    assert!(matches!(parse_input("a3 = a1 * a2.").unwrap(), KnotInput::Relations(_)));
    assert!(matches!(parse_input("% nothing\n").unwrap(), KnotInput::Diagram(d) if d.is_trivial()));
}

#[test]
fn fixtures_round_trip_and_agree_with_gauss() {
    for (name, d) in common::knots() {
        assert_eq!(parse_pd(&d.to_pd()).unwrap(), d, "{name}");
        let g = parse_gauss(&d.to_gauss()).unwrap();
        assert!(presentation_of(&g).isomorphic_to(&presentation_of(&d)), "{name}");
        assert_eq!(presentation_of(&d).relations.len(), d.crossing_count());
    }
}

fn relabelled(d: &KnotDiagram, perm: &[u32]) -> KnotDiagram {
    let xs = d.crossings().iter().map(|x| x.map(|e| perm[e as usize - 1])).collect();
    KnotDiagram::from_crossings(xs).unwrap()
}

proptest! {
    #[test]
    fn relabelling_edges_keeps_the_presentation(k in 1usize..36, seed in any::<u64>()) {
        let (_, d) = common::knots().swap_remove(k);
        let m = d.edge_count() as usize;
        let mut perm: Vec<u32> = (1..=m as u32).collect();
        let mut s = seed | 1;
        for i in (1..m).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            perm.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let e = relabelled(&d, &perm);
        prop_assert_eq!(parse_pd(&e.to_pd()).unwrap(), e.clone());
        prop_assert!(presentation_of(&e).isomorphic_to(&presentation_of(&d)));
        prop_assert_eq!(e.canonical(), d.canonical());
    }
}
