mod common;

use std::time::Duration;

use unknot::knotio::KnotInput;
use unknot::modelfinder::check_model;
use unknot::prover::{verify_proof, ProverLimits};
use unknot::runner::{
    batch, decide, decide_presentation, parse_expected, parse_table, DecisionReport, RunConfig, Status,
};
use unknot::{AxiomSet, Presentation};

fn cfg(secs: u64) -> RunConfig {
    RunConfig { timeout: Duration::from_secs(secs), ..RunConfig::default() }
}

fn knot_input(name: &str) -> KnotInput {
    KnotInput::Diagram(common::knot(name))
}

fn report_invariants(r: &DecisionReport, p: &Presentation) {
    match r.status {
        Status::Unknot => {
            assert!(r.prover.verified && r.countermodel.is_none());
            let proof = r.proof.clone().unwrap();
            let res = unknot::prover::ProofResult {
                status: r.prover.status,
                limit: None,
                subgoals: r.prover.subgoals.clone(),
                proof: Some(proof),
                stats: r.prover.stats.clone(),
            };
            assert!(verify_proof(&res, p, AxiomSet::ALL));
        }
        Status::Knotted => {
            assert!(r.proof.is_none());
            assert!(check_model(r.countermodel.as_ref().unwrap(), p, AxiomSet::ALL));
        }
        Status::Unknown => assert!(r.proof.is_none() && r.countermodel.is_none()),
    }
}

#[test]
fn culprit_is_unknot() {
    let p = common::culprit();
    let r = decide_presentation(&p, "culprit", &cfg(60)).unwrap();
    assert_eq!(r.status, Status::Unknot);
    assert_eq!(r.prover.subgoals, vec![true; 9]);
    report_invariants(&r, &p);
}

#[test]
fn trefoil_is_knotted_at_three() {
    let r = decide(&knot_input("3_1"), "3_1", &cfg(60)).unwrap();
    assert_eq!(r.status, Status::Knotted);
    assert_eq!(r.size(), Some(3));
    assert!(r.model.minimal);
    let d = r.dihedral.as_ref().unwrap();
    assert!(d.model_verified && d.consistent);
    assert_eq!(d.prime, Some(3));
    report_invariants(&r, &unknot::presentation::presentation_of(&common::knot("3_1")));
}

#[test]
fn starved_engines_give_unknown() {
    let c = RunConfig {
        max_size: 2,
        limits: ProverLimits { max_given: 5, ..ProverLimits::default() },
        ..cfg(60)
    };
    let r = decide(&knot_input("3_1"), "3_1", &c).unwrap();
    assert_eq!(r.status, Status::Unknown);
    assert_eq!(r.model.sizes_refuted, vec![2]);
    assert!(r.prover.stats.given > 0);
}

#[test]
fn config_is_validated() {
    let bad = RunConfig { max_size: 1, ..RunConfig::default() };
    assert!(decide(&knot_input("3_1"), "x", &bad).is_err());
    let bad = RunConfig { timeout: Duration::ZERO, ..RunConfig::default() };
    assert!(decide(&knot_input("3_1"), "x", &bad).is_err());
}

#[test]
fn verdicts_do_not_depend_on_the_race() {
    for name in ["4_1", "5_2", "7_4"] {
        let a = decide(&knot_input(name), name, &cfg(60)).unwrap();
        let b = decide(&knot_input(name), name, &RunConfig { timeout: Duration::from_secs(30), ..cfg(60) }).unwrap();
        assert_eq!((a.status, a.size()), (b.status, b.size()), "{name}");
    }
    let unknot_trace = unknot::parse_pd(&common::fixture("traces/fingers.pd")).unwrap();
    let r = decide(&KnotInput::Diagram(unknot_trace), "fingers", &cfg(60)).unwrap();
    assert_eq!(r.status, Status::Unknot);
}

#[test]
fn batch_through_seven_crossings_matches_expected_sizes() {
    let table: String = common::fixture("knots.txt")
        .lines()
        .filter(|l| {
            let n = l.split('_').next().unwrap_or("");
            matches!(n, "3" | "4" | "5" | "6" | "7")
        })
        .map(|l| format!("{l}\n"))
        .collect();
    let entries = parse_table(&table);
    assert_eq!(entries.len(), 14);
    let expected = parse_expected(&common::fixture("expected_sizes.tsv"));
    let seven: Vec<(String, usize)> =
        expected.into_iter().filter(|(n, _)| entries.iter().any(|e| &e.name == n)).collect();
    assert_eq!(seven.len(), 14);
    let r = batch(&entries, Some(&seven), &cfg(60), 4);
    assert_eq!(r.mismatches.as_ref().unwrap(), &vec![]);
    assert!(r.to_table().contains("mismatches: 0"));
}

#[test]
fn batch_edge_cases() {
    let r = batch(&parse_table(""), None, &cfg(10), 2);
    assert!(r.rows.is_empty());
    let line = common::fixture("knots.txt").lines().find(|l| l.starts_with("8_5 ")).unwrap().to_string();
    let r = batch(&parse_table(&line), None, &cfg(60), 1);
    assert_eq!(r.rows[0].size, Some(3));
    let r = batch(&parse_table("bad pd PD[X(1,2)]\nworse svg <x/>\nk pd PD[X(1,1,2,2)]"), None, &cfg(10), 2);
    assert!(r.rows[0].error.is_some() && r.rows[1].error.is_some());
    assert_eq!(r.rows[2].status, Some(Status::Unknot));
}

#[test]
fn reports_serialize() {
    let r = decide(&knot_input("3_1"), "3_1", &cfg(60)).unwrap();
    let v = r.to_json();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "knotted");
    assert_eq!(v["countermodel"]["size"], 3);
}
