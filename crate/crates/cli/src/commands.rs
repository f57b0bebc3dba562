use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use naturegames::classify::{classify_losing_with, Cardinality};
use naturegames::dot::{game_to_dot, reduced_to_dot, write_dot};
use naturegames::game::{enumerate_strategies, restrict_by_strategies, Arena};
use naturegames::harness::{self, Suite};
use naturegames::imperfect::{build_hat_imperfect, build_tilde_imperfect, solve_imperfect_bounded, ImperfectArena};
use naturegames::io::{graph_from_doc, parse_game_doc, parse_imperfect_doc, strategy_to_doc, to_canonical_json, Verdict};
use naturegames::parity::{brute_solve, verify_sure};
use naturegames::topology::{alternate_normalize, build_tilde};
use naturegames::{
    build_check, build_hat, decide_bounded, decide_countable, decide_topo_good, solve_parity, Decision, Guards,
    MooreStrategy, NatureGame, ParityGame, Player,
};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 10;

#[derive(Parser, Debug)]
#[command(name = "naturegames", version, about = "Solve games against Nature")]
pub struct Cli {
    /// Add wall-clock timings to the verdict provenance.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a two-player parity game; YES when Eloise wins from the initial vertex.
    SolveParity { file: PathBuf },
    /// Can Eloise keep the set of lost plays countable, or at most K plays?
    Leaking {
        #[command(flatten)]
        question: LeakQuestion,
        file: PathBuf,
        /// Also write the solved product game as JSON.
        #[arg(long, value_name = "OUT")]
        product: Option<PathBuf>,
    },
    /// Does Eloise have a topologically-good strategy (no Abelard vertices)?
    Topo {
        file: PathBuf,
        #[arg(long, value_name = "OUT")]
        product: Option<PathBuf>,
    },
    /// Questions on imperfect-information arenas, solved up to a memory bound.
    Imperfect {
        #[command(subcommand)]
        question: ImperfectQuestion,
    },
    /// Cardinality of the losing branches of a pointed graph.
    Classify { file: PathBuf },
    /// Cross-check the reductions on a game against strategy enumeration.
    Verify {
        /// Use the brute-force oracle (currently the only mode).
        #[arg(long, required = true)]
        oracle: bool,
        #[arg(long, default_value_t = 1)]
        memory: usize,
        file: PathBuf,
    },
    /// Render a game, or one of its reductions, as Graphviz DOT.
    ExportDot {
        file: PathBuf,
        out: PathBuf,
        #[arg(long, value_enum)]
        reduction: Option<Reduction>,
        /// Budget for the check reduction.
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
    /// Run the seeded cross-validation suites.
    Harness {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        cases: usize,
        /// Restrict to the named suites (default: all).
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LeakQuestion {
    #[arg(long)]
    countable: bool,
    #[arg(long, value_name = "K")]
    bound: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum ImperfectQuestion {
    Leaking {
        #[arg(long, required = true)]
        countable: bool,
        #[arg(long)]
        memory: usize,
        file: PathBuf,
    },
    Topo {
        #[arg(long)]
        memory: usize,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Reduction {
    Hat,
    Check,
    Tilde,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_game(path: &Path) -> Result<NatureGame> {
    let doc = parse_game_doc(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(NatureGame::from_doc(&doc)?)
}

fn load_imperfect(path: &Path) -> Result<ImperfectArena> {
    let doc = parse_imperfect_doc(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(ImperfectArena::from_doc(&doc)?)
}

fn emit(verdict: Verdict, started: Instant, timings: bool) -> Result<u8> {
    let verdict = with_timings(verdict, started, timings);
    print!("{}", to_canonical_json(&verdict)?);
    Ok(if verdict.is_yes() { EXIT_YES } else { EXIT_NO })
}

fn decision_verdict(question: &str, g: &NatureGame, d: &Decision, product: Option<&Path>) -> Result<Verdict> {
    if let Some(out) = product {
        std::fs::write(out, to_canonical_json(&d.product_doc())?)
            .with_context(|| format!("writing {}", out.display()))?;
    }
    let mut v = Verdict::yes_no(question, d.holds);
    v.provenance = d.provenance();
    v.witness = match &d.strategy {
        Some(pb) if d.holds => Some(serde_json::to_value(strategy_to_doc(
            &pb.strategy,
            g,
            Some(&pb.memory_labels),
        ))?),
        _ => None,
    };
    Ok(v)
}

pub fn run(cli: &Cli) -> Result<u8> {
    let started = Instant::now();
    let guards = Guards::from_env()?;
    let verdict = match &cli.command {
        Command::SolveParity { file } => {
            let doc = parse_game_doc(&read(file)?)?;
            let p = ParityGame::from_doc(&doc)?;
            let s = solve_parity(&p);
            let winner = s.winner;
            let strategy = s.strategy(winner, &p);
            let mut v = Verdict::yes_no("solve-parity", winner == Player::Eloise);
            v.witness = Some(serde_json::to_value(strategy_to_doc(&strategy, &p, None))?);
            let region = |pl: Player| -> Vec<&str> { (0..p.len()).filter(|&u| s.region[u] == pl).map(|u| p.id(u)).collect() };
            v.provenance = json!({
                "vertices": p.len(),
                "edges": p.edge_count(),
                "winner": winner.to_string(),
                "eloise_region": region(Player::Eloise),
                "abelard_region": region(Player::Abelard),
            });
            v
        }
        Command::Leaking { question, file, product } => {
            let g = load_game(file)?;
            match question.bound {
                Some(k) => decision_verdict(&format!("bounded({k})"), &g, &decide_bounded(&g, k, &guards)?, product.as_deref())?,
                None => decision_verdict("countable", &g, &decide_countable(&g, &guards)?, product.as_deref())?,
            }
        }
        Command::Topo { file, product } => {
            let g = load_game(file)?;
            decision_verdict("topo", &g, &decide_topo_good(&g, &guards)?, product.as_deref())?
        }
        Command::Imperfect { question } => {
            let (name, memory, file) = match question {
                ImperfectQuestion::Leaking { memory, file, .. } => ("imperfect-countable", *memory, file),
                ImperfectQuestion::Topo { memory, file } => ("imperfect-topo", *memory, file),
            };
            let a = load_imperfect(file)?;
            let game = match question {
                ImperfectQuestion::Leaking { .. } => build_hat_imperfect(&a, &guards)?,
                ImperfectQuestion::Topo { .. } => build_tilde_imperfect(&a, &guards)?,
            };
            let found = solve_imperfect_bounded(&game, memory, &guards)?;
            let mut v = Verdict::yes_no(name, found.is_some());
            v.witness = found.as_ref().map(|s| game.strategy_to_json(s));
            v.provenance = json!({
                "reduced_vertices": game.len(),
                "observation_classes": game.class_count(),
                "memory_bound": memory,
                "complete": false,
            });
            v
        }
        Command::Classify { file } => {
            let doc = parse_game_doc(&read(file)?)?;
            let g = graph_from_doc(&doc)?;
            let bc = classify_losing_with(&g, &guards)?;
            let full = bc.to_json(&g);
            let mut answer = json!({ "kind": full["kind"] });
            if let Some(c) = full.get("count") {
                answer["count"] = c.clone();
            }
            let v = Verdict {
                question: "classify".into(),
                answer,
                witness: full.get("witness").cloned(),
                provenance: json!({ "vertices": g.len(), "edges": g.edge_count() }),
            };
            // Classification always has an answer.
            print!("{}", to_canonical_json(&with_timings(v, started, cli.timings))?);
            return Ok(EXIT_YES);
        }
        Command::Verify { memory, file, .. } => verify_oracle(&load_game(file)?, *memory, &guards)?,
        Command::ExportDot { file, out, reduction, bound } => {
            let g = load_game(file)?;
            let text = match reduction {
                None => game_to_dot(&g),
                Some(Reduction::Hat) => reduced_to_dot(&build_hat(&g)),
                Some(Reduction::Check) => reduced_to_dot(&build_check(&g, *bound, &guards)?),
                Some(Reduction::Tilde) => reduced_to_dot(&build_tilde(&alternate_normalize(&g)?)?),
            };
            write_dot(out, &text)?;
            return Ok(EXIT_YES);
        }
        Command::Harness { seed, cases, suites } => {
            let selected = if suites.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suites
                    .iter()
                    .map(|s| Suite::from_name(s).with_context(|| format!("unknown suite `{s}`")))
                    .collect::<Result<Vec<_>>>()?
            };
            let report = harness::run(*seed, *cases, &selected, &guards);
            let mut v = Verdict::yes_no("harness", report.passed());
            v.provenance = serde_json::to_value(&report)?;
            v
        }
    };
    emit(verdict, started, cli.timings)
}

fn with_timings(mut v: Verdict, started: Instant, timings: bool) -> Verdict {
    if timings {
        if let Value::Object(map) = &mut v.provenance {
            map.insert("elapsed_ms".into(), json!(started.elapsed().as_secs_f64() * 1e3));
        }
    }
    v
}

/// Re-checks every YES of the reductions against all Abelard strategies with
/// at most `memory` states, and the parity solver against brute force on the
/// sure-winning view of the game.
fn verify_oracle(g: &NatureGame, memory: usize, guards: &Guards) -> Result<Verdict> {
    if memory == 0 {
        bail!("--memory must be at least 1");
    }
    let opponents = enumerate_strategies(g, Player::Abelard, memory, guards)?;
    let leaks = |sigma: &MooreStrategy| -> Result<Vec<Cardinality>> {
        opponents
            .iter()
            .map(|tau| Ok(classify_losing_with(&restrict_by_strategies(g, sigma, tau)?.graph, guards)?.verdict))
            .collect()
    };
    let mut checks = Vec::new();
    let mut ok = true;
    let mut record = |name: String, claimed: bool, consistent: bool, detail: Value| {
        ok &= consistent;
        checks.push(json!({ "check": name, "claimed": claimed, "consistent": consistent, "detail": detail }));
    };

    let d = decide_countable(g, guards)?;
    let (consistent, detail) = match (&d.strategy, d.holds) {
        (Some(pb), true) => {
            let worst = leaks(&pb.strategy)?;
            let bad = worst.iter().filter(|c| **c == Cardinality::Uncountable).count();
            (bad == 0, json!({ "opponents": worst.len(), "uncountable": bad }))
        }
        _ => (true, Value::Null),
    };
    record("countable".into(), d.holds, consistent, detail);

    for k in 0..=2u32 {
        let d = decide_bounded(g, k, guards)?;
        let (consistent, detail) = match (&d.strategy, d.holds) {
            (Some(pb), true) => {
                let worst = leaks(&pb.strategy)?;
                let bad = worst
                    .iter()
                    .filter(|c| !matches!(c, Cardinality::Finite(n) if *n <= u64::from(k)))
                    .count();
                (bad == 0, json!({ "opponents": worst.len(), "exceeding": bad }))
            }
            _ => (true, Value::Null),
        };
        record(format!("bounded({k})"), d.holds, consistent, detail);
    }

    let sure = ParityGame::nature_as(g, Player::Abelard);
    let fast = solve_parity(&sure);
    let slow = brute_solve(&sure, guards)?;
    let strategy_ok = verify_sure(&sure, &fast.strategy(fast.winner, &sure));
    record(
        "sure-parity".into(),
        fast.winner == Player::Eloise,
        fast.region == slow.region && strategy_ok,
        json!({ "brute_force_agrees": fast.region == slow.region, "strategy_verified": strategy_ok }),
    );

    let mut v = Verdict::yes_no("verify", ok);
    v.witness = Some(Value::Array(checks));
    v.provenance = json!({ "memory_bound": memory, "vertices": g.len(), "opponents": opponents.len() });
    Ok(v)
}
