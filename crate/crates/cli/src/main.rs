use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use unknot::invariants::{determinant_of, determinant_warning, dihedral_countermodel_of, fox_colorings_of, Coloring};
use unknot::knotio::KnotInput;
use unknot::modelfinder::{check_model, find_minimal_countermodel_with, format_interpretation, SearchResult};
use unknot::prover::{saturate, verify_proof, ProofStatus};
use unknot::rmengine::{check_trace_properties, parse_moves, prove_from_final, trace_equations};
use unknot::runner::{batch, decide, parse_expected, parse_table, presentation_of_input, worker_count, RunConfig};
use unknot::{parse_input, AxiomSet, Budget};

const ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "unknot", version, about = "Decide whether a knot diagram is the unknot")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Axioms to use, by index or name: 1,2,3 or Q1,Q2',Q3.
    #[arg(long, default_value = "1,2,3")]
    axioms: AxiomSet,
    /// Print a JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Race the prover against the countermodel search.
    Decide {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_size: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a minimal countermodel only.
    Refute {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_size: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the prover only.
    Prove {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide every entry of a `<name> <format> <code>` table.
    Batch {
        table: PathBuf,
        /// Tab-separated `knot size` file to diff against.
        #[arg(long)]
        expected: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        max_size: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a move script and check the labelled equation trace.
    RmTrace {
        file: PathBuf,
        moves: PathBuf,
        /// Prover budget per crossing, in seconds.
        #[arg(long, default_value_t = 1.0)]
        per_crossing: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Determinant, Fox colorings and the dihedral countermodel.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn read_input(path: &Path) -> Result<KnotInput> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_input(&text).with_context(|| format!("parsing {}", path.display()))
}

fn config(common: &Common, max_size: usize) -> Result<RunConfig> {
    if !(common.timeout > 0.0) {
        bail!("--timeout must be positive");
    }
    Ok(RunConfig {
        timeout: Duration::from_secs_f64(common.timeout),
        max_size,
        axioms: common.axioms,
        json: common.json,
        ..RunConfig::default()
    })
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Decide { file, max_size, common } => {
            let cfg = config(&common, max_size)?;
            let input = read_input(&file)?;
            let r = decide(&input, &file.display().to_string(), &cfg)?;
            if cfg.json {
                print_json(&r.to_json());
            } else {
                println!("{}: {}", r.input, r.status.as_str());
                if let Some(pr) = &r.proof {
                    println!("proved {} subgoals; {} given clauses", r.prover.subgoals.len(), r.prover.stats.given);
                    print!("{}", pr.to_text());
                }
                if let Some(m) = &r.countermodel {
                    let p = presentation_of_input(&input);
                    println!("countermodel of size {} (minimal: {})", m.size, r.model.minimal);
                    print!("{}", format_interpretation(m, &p.generators));
                }
                if r.status == unknot::runner::Status::Unknown {
                    println!("sizes refuted: {:?}; prover: {:?}", r.model.sizes_refuted, r.prover.limit);
                }
                if let Some(d) = &r.dihedral {
                    println!("determinant {}; dihedral check consistent: {}", d.determinant, d.consistent);
                }
            }
            Ok(r.status.exit_code() as u8)
        }
        Cmd::Refute { file, max_size, common } => {
            let cfg = config(&common, max_size)?;
            let p = presentation_of_input(&read_input(&file)?);
            let o = find_minimal_countermodel_with(&p, cfg.axioms, cfg.max_size, &Budget::with_timeout(cfg.timeout));
            if let Some(m) = o.model() {
                if !check_model(m, &p, cfg.axioms) {
                    bail!("countermodel failed its check");
                }
            }
            if cfg.json {
                print_json(&serde_json::to_value(&o)?);
            } else {
                match &o.result {
                    SearchResult::Found(m) => {
                        println!("countermodel of size {} (sizes refuted: {:?})", m.size, o.sizes_refuted);
                        print!("{}", format_interpretation(m, &p.generators));
                    }
                    SearchResult::Exhausted { max_size } => println!("no countermodel up to size {max_size}"),
                    SearchResult::ResourceOut => println!("out of time; sizes refuted: {:?}", o.sizes_refuted),
                }
            }
            Ok(if o.model().is_some() { 1 } else { 2 })
        }
        Cmd::Prove { file, common } => {
            let cfg = config(&common, 2)?;
            let p = presentation_of_input(&read_input(&file)?);
            let r = saturate(&p, cfg.axioms, &cfg.limits, &Budget::with_timeout(cfg.timeout));
            let ok = verify_proof(&r, &p, cfg.axioms);
            if r.status == ProofStatus::Proved && !ok {
                bail!("proof failed replay");
            }
            if cfg.json {
                print_json(&serde_json::to_value(&r)?);
            } else {
                println!("{:?} ({:?}); {} given, {} kept", r.status, r.limit, r.stats.given, r.stats.kept);
                if let Some(pr) = &r.proof {
                    print!("{}", pr.to_text());
                }
            }
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::Batch { table, expected, max_size, common } => {
            let cfg = config(&common, max_size)?;
            let text = std::fs::read_to_string(&table).with_context(|| format!("reading {}", table.display()))?;
            let entries = parse_table(&text);
            let exp = match &expected {
                Some(path) => Some(parse_expected(&std::fs::read_to_string(path)?)),
                None => None,
            };
            let r = batch(&entries, exp.as_deref(), &cfg, worker_count());
            if cfg.json {
                print_json(&serde_json::to_value(&r)?);
            } else {
                print!("{}", r.to_table());
            }
            let bad = r.rows.iter().any(|row| row.error.is_some()) || r.mismatches.as_ref().is_some_and(|m| !m.is_empty());
            Ok(if bad { ERROR } else { 0 })
        }
        Cmd::RmTrace { file, moves, per_crossing, common } => {
            let cfg = config(&common, 2)?;
            let KnotInput::Diagram(d) = read_input(&file)? else {
                bail!("rm-trace needs a PD or Gauss diagram");
            };
            let script = std::fs::read_to_string(&moves).with_context(|| format!("reading {}", moves.display()))?;
            let t = trace_equations(&d, &parse_moves(&script)?)?;
            let budget = Budget::with_timeout(cfg.timeout);
            let rep =
                check_trace_properties(&t, cfg.axioms, &cfg.limits, Duration::from_secs_f64(per_crossing), &budget);
            let finished = t.final_step().diagram.is_trivial();
            let triv = finished.then(|| prove_from_final(&t, cfg.axioms, &cfg.limits, &budget));
            let triv_ok = triv.as_ref().is_some_and(|r| r.status == ProofStatus::Proved);
            if cfg.json {
                let mut v = t.to_json();
                v["report"] = serde_json::to_value(&rep)?;
                v["trivial_proved"] = triv_ok.into();
                print_json(&v);
            } else {
                let names = &t.presentation.generators;
                for (i, s) in t.steps.iter().enumerate() {
                    let mv = s.applied.as_ref().map(|m| m.to_string()).unwrap_or_else(|| "start".into());
                    let labels: Vec<String> = s.arc_labels().iter().map(|l| l.display(names).to_string()).collect();
                    println!("D{}: {mv}: {} [{}]", i + 1, s.diagram.to_pd(), labels.join(", "));
                }
                for (l, r) in t.added_equations() {
                    println!("  {} = {}", l.display(names), r.display(names));
                }
                println!(
                    "property 1: {}, property 2: {}, property 3: {}, property 4: {}",
                    rep.property1,
                    rep.property2,
                    if rep.property3_all_derived() { "all derived" } else { "some unverified" },
                    rep.property4
                );
                for p in &rep.problems {
                    println!("  {p}");
                }
                match (finished, triv_ok) {
                    (false, _) => println!("final diagram has crossings; no collapse to prove"),
                    (true, ok) => println!("collapse from the final equations: {}", if ok { "proved" } else { "not proved" }),
                }
            }
            Ok(if rep.all_hold() && triv_ok { 0 } else { 2 })
        }
        Cmd::Invariants { file, json } => {
            let p = presentation_of_input(&read_input(&file)?);
            let det = determinant_of(&p);
            let primes: Vec<u64> = (2..=31u64).filter(|n| (2..*n).all(|k| n % k != 0)).collect();
            let colorable: Vec<u64> = if p.generators.len() < 2 {
                Vec::new()
            } else {
                primes.iter().copied().filter(|&q| matches!(fox_colorings_of(&p, q), Coloring::Nonconstant(_))).collect()
            };
            let dihedral = if p.generators.len() < 2 { None } else { dihedral_countermodel_of(&p) };
            let warning = if p.generators.len() < 2 { None } else { determinant_warning(&det) };
            if json {
                print_json(&serde_json::json!({
                    "determinant": det.to_string(),
                    "warning": warning,
                    "colorable_primes": colorable,
                    "dihedral": dihedral.as_ref().map(|m| m.to_json()),
                }));
            } else {
                println!("determinant: {det}");
                if let Some(w) = warning {
                    println!("warning: {w}");
                }
                println!("primes <= 31 with nonconstant colorings: {colorable:?}");
                if let Some(m) = dihedral {
                    println!("dihedral countermodel of order {}", m.size);
                    print!("{}", format_interpretation(&m, &p.generators));
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR)
        }
    }
}
