mod common;

use std::time::Duration;

use unknot::invariants::determinant;
use unknot::knotio::parse_pd;
use unknot::prover::{check_proof, ProofStatus, ProverLimits, Term};
use unknot::rmengine::{
    apply_move, check_trace_properties, is_planar, parse_moves, prove_from_final, trace_equations, Derivation,
    LabelledTrace, MoveKind, MoveSpec, Pass, Side,
};
use unknot::{AxiomSet, Budget, KnotDiagram};

const TRACES: [&str; 9] =
    ["zero", "kink", "double_kink", "bigon", "bigon2", "triangle", "triangle_twice", "six_crossings", "fingers"];

fn trace(name: &str) -> LabelledTrace {
    let d = parse_pd(&common::fixture(&format!("traces/{name}.pd"))).unwrap();
    let moves = parse_moves(&common::fixture(&format!("traces/{name}.moves"))).unwrap();
    trace_equations(&d, &moves).unwrap()
}

fn report_within(t: &LabelledTrace, secs: u64) -> unknot::rmengine::TraceReport {
    check_trace_properties(t, AxiomSet::ALL, &ProverLimits::default(), Duration::from_secs(secs), &Budget::unlimited())
}

fn report(t: &LabelledTrace) -> unknot::rmengine::TraceReport {
    report_within(t, 5)
}

fn same_knot(a: &KnotDiagram, b: &KnotDiagram) {
    assert!(is_planar(b), "{}", b.to_pd());
    assert_eq!(determinant(a), determinant(b));
}

#[test]
fn curls_keep_the_knot_and_undo() {
    for (name, d) in common::knots().into_iter().take(12) {
        let d = d.canonical();
        for e in 1..=d.edge_count() {
            for pass in [Pass::Under, Pass::Over] {
                for side in [Side::Left, Side::Right] {
                    let up = apply_move(&d, &MoveSpec::rm1_up(e, pass, side)).unwrap();
                    same_knot(&d, &up);
                    assert_eq!(up.crossing_count(), d.crossing_count() + 1);
                    let down = apply_move(&up, &MoveSpec::rm1_down(up.crossing_count())).unwrap();
                    assert_eq!(down, d, "{name} edge {e} {pass:?} {side:?}");
                }
            }
        }
    }
}

#[test]
fn fingers_keep_the_knot_and_undo() {
    let mut done = 0;
    for (name, d) in common::knots().into_iter().take(12) {
        let d = d.canonical();
        for e in 1..=d.edge_count() {
            for f in 1..=d.edge_count() {
                for side in [Side::Left, Side::Right] {
                    let Ok(up) = apply_move(&d, &MoveSpec::rm2_up(e, f, Some(side))) else { continue };
                    same_knot(&d, &up);
                    let n = up.crossing_count();
                    let down = apply_move(&up, &MoveSpec::rm2_down(n - 1, n)).unwrap();
                    assert_eq!(down, d, "{name} {e} over {f} {side:?}");
                    done += 1;
                }
            }
        }
    }
    assert!(done > 100, "{done}");
}

#[test]
fn triangle_moves_keep_the_knot() {
    let mut done = 0;
    for (_, d) in common::knots() {
        let d = d.canonical();
        let n = d.crossing_count();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let Ok(r) = apply_move(&d, &MoveSpec::rm3(i, j, k)) else { continue };
                    same_knot(&d, &r);
                    let back = apply_move(&r, &MoveSpec::rm3(i, j, k)).unwrap();
                    assert_eq!(back, d);
                    done += 1;
                }
            }
        }
    }
    assert!(done > 0);
}

#[test]
fn wrong_sites_are_rejected() {
    let d = common::knot("3_1").canonical();
    for k in 1..=3 {
        let e = apply_move(&d, &MoveSpec::rm1_down(k)).unwrap_err();
        assert!(e.to_string().contains("RM1_down"), "{e}");
    }
    assert!(apply_move(&d, &MoveSpec::rm2_down(1, 2)).is_err());
    assert!(apply_move(&d, &MoveSpec::rm1_down(9)).is_err());
    let e = apply_move(&d, &MoveSpec::rm3(1, 2, 3)).unwrap_err();
    assert!(e.to_string().contains("RM3"), "{e}");
}

#[test]
fn signs_follow_the_moves() {
    let writhe = |d: &KnotDiagram| d.signs().iter().map(|&s| s as i32).sum::<i32>();
    let d = common::knot("5_2").canonical();
    let mut fingers = 0;
    for e in 1..=d.edge_count() {
        for f in 1..=d.edge_count() {
            if let Ok(up) = apply_move(&d, &MoveSpec::rm2_up(e, f, None)) {
                assert_eq!(writhe(&up), writhe(&d));
                fingers += 1;
            }
        }
    }
    assert!(fingers > 0);
    for pass in [Pass::Under, Pass::Over] {
        for side in [Side::Left, Side::Right] {
            let c = apply_move(&d, &MoveSpec::rm1_up(3, pass, side)).unwrap();
            assert_eq!((writhe(&c) - writhe(&d)).abs(), 1);
        }
    }
}

#[test]
fn scripts_round_trip_through_text() {
    let text = "% comment\nRM1_up @ edge 3 over left\n\nRM2_up @ edge 2,5 right\nRM2_down @ crossing 4,7\nRM3 @ crossing 1,2,3\nRM1_down @ crossing 2\n";
    let ms = parse_moves(text).unwrap();
    assert_eq!(ms.len(), 5);
    for m in &ms {
        assert_eq!(m.to_string().parse::<MoveSpec>().unwrap(), *m);
    }
    assert_eq!(ms[2].kind, MoveKind::Rm2Down);
    assert!(parse_moves("RM2_down @ crossing 4").is_err());
    assert!(parse_moves("RM4 @ crossing 1").is_err());
    let err = parse_moves("RM1_down @ crossing 1\nRM1_down @ edge 1").unwrap_err();
    assert!(err.to_string().starts_with("line 2"), "{err}");
}

#[test]
fn unknot_traces_end_trivial_with_all_properties() {
    for name in TRACES {
        let t = trace(name);
        assert!(t.final_step().diagram.is_trivial(), "{name}");
        let r = report(&t);
        assert!(r.all_hold(), "{name}: {:?}", r.problems);
        let p = prove_from_final(&t, AxiomSet::ALL, &ProverLimits::default(), &Budget::with_timeout(Duration::from_secs(10)));
        assert_eq!(p.status, ProofStatus::Proved, "{name}");
        let proof = p.proof.as_ref().unwrap();
        check_proof(proof, &t.presentation, AxiomSet::ALL, &t.added_equations()).unwrap();
    }
}

#[test]
fn kink_adds_one_equation() {
    let t = trace("kink");
    let added = t.added_equations();
    assert_eq!(added, vec![(Term::Const(0), Term::Const(0))]);
    assert_eq!(t.steps.len(), 2);
    assert_eq!(t.final_step().arc_labels(), vec![Term::Const(0)]);
}

#[test]
fn two_crossing_bigon_equates_the_generators() {
    let t = trace("bigon2");
    assert_eq!(t.presentation.generators.len(), 2);
    assert_eq!(t.added_equations().len(), 1);
    // The strand enters and leaves the bigon on the same arc; the middle arc
    // is that arc's square at a removed crossing.
    assert_eq!(t.added_equations()[0], (Term::Const(1), Term::Const(1)));
    let p = prove_from_final(&t, AxiomSet::ALL, &ProverLimits::default(), &Budget::unlimited());
    assert_eq!(p.status, ProofStatus::Proved);
}

#[test]
fn zero_crossing_curl_stays_one_arc() {
    let t = trace("zero");
    assert!(t.steps.iter().all(|s| s.arc_labels().len() == 1));
    assert!(report(&t).all_hold());
}

#[test]
fn equation_sets_grow_and_first_is_the_relations() {
    let t = trace("six_crossings");
    assert_eq!(t.steps[0].equations.len(), t.presentation.relations.len());
    for w in t.steps.windows(2) {
        assert!(w[1].equations.starts_with(&w[0].equations));
        assert!(w[1].equations.len() > w[0].equations.len());
    }
}

#[test]
fn triangle_move_adds_a_distributivity_instance() {
    let t = trace("triangle");
    let (l, r) = &t.steps[1].equations[t.steps[0].equations.len()];
    let Term::App(xy, z) = l else { panic!() };
    let Term::App(xz, yz) = r else { panic!() };
    let (Term::App(x, y), Term::App(x2, z2), Term::App(y2, z3)) = (&**xy, &**xz, &**yz) else { panic!() };
    assert!(x == x2 && y == y2 && z == z2 && z == z3);
}

#[test]
fn corrupted_equations_are_flagged() {
    let mut t = trace("triangle");
    // Drop the triangle move's equation from every later set.
    let k = t.steps[0].equations.len();
    for s in t.steps.iter_mut().skip(1) {
        s.equations.remove(k);
    }
    let r = report(&t);
    assert!(!r.property2 || !r.property3_all_derived(), "{:?}", r.problems);

    let mut t = trace("bigon");
    t.steps[1].equations.push((Term::Const(0), Term::Const(1)));
    let r = report(&t);
    assert!(!r.property1 || !r.property2);

    let mut t = trace("double_kink");
    t.steps[1].labels[0] = Term::Const(7);
    let r = report_within(&t, 1);
    assert!(!r.all_hold());
    assert!(r.property3.iter().flatten().any(|d| *d == Derivation::Unverified) || !r.property4);
}

#[test]
fn culprit_axiom_subsets() {
    use unknot::rmengine::{axioms_for_moves, subset_axiom_refute};
    let p = common::culprit();
    let mut sizes = Vec::new();
    // {Q1,Q3} already fails at order 2: the right projection x ▷ y = y is
    // idempotent and distributive, and the relations' (b, c) pairs split
    // the generators into two classes.
    for (set, want) in [("2,3", 2), ("1,3", 2), ("1,2", 4)] {
        let ax: AxiomSet = set.parse().unwrap();
        let o = subset_axiom_refute(&p, ax, 8, &Budget::with_timeout(Duration::from_secs(60)));
        let m = o.model().unwrap_or_else(|| panic!("{set}"));
        assert!(unknot::modelfinder::check_model(m, &p, ax));
        assert!(o.is_certified());
        assert_eq!(o.size(), Some(want), "{set}");
        sizes.push(want);
    }
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    let right = unknot::modelfinder::FiniteQuandle::from_rows(&[vec![0, 1], vec![0, 1]]);
    assert!(right.satisfies("1,3".parse().unwrap()) && !right.satisfies(AxiomSet::ALL));
    assert_eq!(axioms_for_moves(&[MoveKind::Rm2Up, MoveKind::Rm3]), "2,3".parse().unwrap());
}
