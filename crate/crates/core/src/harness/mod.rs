//! Seeded cross-validation suites: each pits a decision procedure against an
//! independent oracle on random instances and counts violations. A suite is
//! reproducible from its seed; instances that trip a size guard are counted
//! separately and skipped.

pub mod gen;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cardinality::{decide_bounded, decide_countable};
use crate::classify::{classify_losing_with, enumerate_losing_lassos, BranchCardinality, Cardinality, Witness};
use crate::condition::{compile_check, compile_hat, compile_tilde, eval_on_lasso, Condition};
use crate::error::{Error, Result};
use crate::game::{enumerate_strategies, restrict_by_strategies, MooreStrategy, NatureGame, Player};
use crate::graph::{coreachable, parity_traps, PointedGraph};
use crate::guard::Guards;
use crate::imperfect::{build_hat_imperfect, solve_imperfect_bounded};
use crate::oracle;
use crate::parity::{brute_solve, solve_parity, verify_sure_from, ParityGame};
use crate::topology::{alternate_normalize, decide_topo_good};

pub use gen::GameShape;

/// Failures kept per suite in the report.
const KEPT_FAILURES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Parity,
    Transducer,
    Classifier,
    HatSoundness,
    Bounded,
    Topology,
    Imperfect,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Parity,
        Suite::Transducer,
        Suite::Classifier,
        Suite::HatSoundness,
        Suite::Bounded,
        Suite::Topology,
        Suite::Imperfect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Parity => "parity",
            Suite::Transducer => "transducer",
            Suite::Classifier => "classifier",
            Suite::HatSoundness => "hat-soundness",
            Suite::Bounded => "bounded",
            Suite::Topology => "topology",
            Suite::Imperfect => "imperfect",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    fn tag(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64 + 1
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    /// Cases where the property had something to check (e.g. a YES verdict).
    pub checked: usize,
    pub violations: usize,
    pub guarded: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, cases: usize) -> Self {
        SuiteReport {
            suite: suite.name().into(),
            cases,
            ..Default::default()
        }
    }

    fn fail(&mut self, what: String) {
        self.violations += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(what);
        }
    }

    /// Records a guard trip; any other error is a violation.
    fn error(&mut self, case: usize, e: Error) {
        if e.is_guard() {
            self.guarded += 1;
        } else {
            self.fail(format!("case {case}: {e}"));
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

fn rng(seed: u64, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ suite.tag())
}

pub fn run(seed: u64, cases: usize, suites: &[Suite], guards: &Guards) -> Report {
    Report {
        seed,
        suites: suites.iter().map(|&s| run_suite(s, seed, cases, guards)).collect(),
    }
}

pub fn run_suite(suite: Suite, seed: u64, cases: usize, guards: &Guards) -> SuiteReport {
    let mut r = rng(seed, suite);
    let mut report = SuiteReport::new(suite, cases);
    match suite {
        Suite::Parity => parity_suite(&mut r, cases, guards, &mut report),
        Suite::Transducer => transducer_suite(&mut r, cases, &mut report),
        Suite::Classifier => classifier_suite(&mut r, cases, guards, &mut report),
        Suite::HatSoundness => hat_suite(&mut r, cases, guards, &mut report),
        Suite::Bounded => bounded_suite(&mut r, cases, guards, &mut report),
        Suite::Topology => topology_suite(&mut r, cases, guards, &mut report),
        Suite::Imperfect => imperfect_suite(&mut r, cases, guards, &mut report),
    }
    report
}

fn parity_suite(r: &mut ChaCha8Rng, cases: usize, guards: &Guards, rep: &mut SuiteReport) {
    for case in 0..cases {
        let g = gen::random_parity_game(r, 6, 3);
        let fast = solve_parity(&g);
        let slow = match brute_solve(&g, guards) {
            Ok(s) => s,
            Err(e) => {
                rep.error(case, e);
                continue;
            }
        };
        rep.checked += 1;
        if fast.region != slow.region || fast.winner != slow.winner {
            rep.fail(format!("case {case}: regions differ on {:?}", g.to_doc()));
            continue;
        }
        for player in [Player::Eloise, Player::Abelard] {
            let sigma = fast.strategy(player, &g);
            let bad = (0..g.len())
                .filter(|&v| fast.region[v] == player)
                .find(|&v| !verify_sure_from(&g, &sigma, v));
            if let Some(v) = bad {
                rep.fail(format!("case {case}: {player} strategy loses from v{v}"));
            }
        }
    }
}

fn transducer_suite(r: &mut ChaCha8Rng, cases: usize, rep: &mut SuiteReport) {
    use rand::Rng;
    for condition in [Condition::Hat, Condition::Check, Condition::Tilde] {
        for case in 0..cases {
            let d = r.gen_range(0..=3);
            let t = match condition {
                Condition::Hat => compile_hat(d),
                Condition::Check => compile_check(d),
                Condition::Tilde => compile_tilde(d),
            };
            let (handle, lp) = gen::random_lasso(r, condition, d, 12);
            rep.checked += 1;
            match eval_on_lasso(&t, &handle, &lp) {
                Ok(got) if got == oracle::holds(condition, &handle, &lp) => {}
                Ok(got) => rep.fail(format!(
                    "{} case {case}: transducer says {got} on {handle:?} / {lp:?}",
                    condition.name()
                )),
                Err(e) => rep.fail(format!("{} case {case}: {e}", condition.name())),
            }
        }
    }
    rep.cases = 3 * cases;
}

fn closes(g: &PointedGraph, cycle: &[usize]) -> bool {
    !cycle.is_empty()
        && cycle
            .iter()
            .zip(cycle.iter().cycle().skip(1))
            .all(|(&a, &b)| g.successors(a).contains(&b))
}

/// Checks a verdict against lasso counts and its witness, without reusing
/// the classifier's own witness checker.
fn check_verdict(g: &PointedGraph, bc: &BranchCardinality, guards: &Guards) -> Result<Option<String>> {
    let n = g.len();
    let count = |h: usize, l: usize| enumerate_losing_lassos(g, h, l, guards).map(|v| v.len() as u64);
    Ok(match (&bc.verdict, &bc.witness) {
        (Cardinality::Finite(k), _) => {
            let full = count(n, n)?;
            (full != *k).then(|| format!("Finite({k}) but {full} lassos"))
        }
        (Cardinality::CountablyInfinite, Witness::Pump { vertex, cycle, path, trap }) => {
            let reach = g.reachable();
            let walk = path.windows(2).all(|w| g.successors(w[0]).contains(&w[1]));
            let trap_min = trap.iter().map(|&v| g.priority(v)).min();
            let ok = reach[*vertex]
                && closes(g, cycle)
                && cycle.first() == Some(vertex)
                && walk
                && path.first() == Some(vertex)
                && path.last().is_some_and(|v| trap.contains(v))
                && closes(g, trap)
                && !trap.contains(vertex)
                && trap_min.is_some_and(|c| c % 2 == 1);
            (!ok || count(n, n)? == 0).then(|| "bad countable witness".to_string())
        }
        (Cardinality::CountablyInfinite, _) => Some("countable without a pump".into()),
        (Cardinality::Uncountable, Witness::TwoCycles { vertex, priority, cycles }) => {
            let [a, b] = cycles;
            let reach = g.reachable();
            let min = a.iter().chain(b).map(|&v| g.priority(v)).min();
            let ab: Vec<usize> = a.iter().chain(b).copied().collect();
            let ba: Vec<usize> = b.iter().chain(a).copied().collect();
            let ok = reach[*vertex]
                && closes(g, a)
                && closes(g, b)
                && a.first() == Some(vertex)
                && b.first() == Some(vertex)
                && a.len() == b.len()
                && a != b
                && ab != ba
                && min == Some(*priority)
                && priority % 2 == 1;
            (!ok).then(|| format!("bad uncountable witness {a:?} / {b:?}"))
        }
        (Cardinality::Uncountable, _) => Some("uncountable without a cycle pair".into()),
    })
}

fn classifier_suite(r: &mut ChaCha8Rng, cases: usize, guards: &Guards, rep: &mut SuiteReport) {
    let mut graphs: Vec<PointedGraph> = (1..=3).flat_map(|n| gen::all_graphs(n, 2)).collect();
    graphs.extend((0..cases).map(|_| gen::random_graph(r, 4, 2)));
    rep.cases = graphs.len();
    for (case, g) in graphs.iter().enumerate() {
        let outcome = classify_losing_with(g, guards).and_then(|bc| check_verdict(g, &bc, guards));
        match outcome {
            Ok(None) => rep.checked += 1,
            Ok(Some(msg)) => rep.fail(format!(
                "case {case}: {msg} on succ {:?} prio {:?}",
                g.adjacency(),
                g.priorities()
            )),
            Err(e) => rep.error(case, e),
        }
    }
}

/// Worst verdict over every Abelard strategy with memory ≤ 2.
fn worst_against_opponents(g: &NatureGame, sigma: &MooreStrategy, guards: &Guards) -> Result<Vec<Cardinality>> {
    let mut out = Vec::new();
    for tau in enumerate_strategies(g, Player::Abelard, 2, guards)? {
        let o = restrict_by_strategies(g, sigma, &tau)?;
        out.push(classify_losing_with(&o.graph, guards)?.verdict);
    }
    Ok(out)
}

fn hat_suite(r: &mut ChaCha8Rng, cases: usize, guards: &Guards, rep: &mut SuiteReport) {
    let shape = GameShape::cardinality();
    for case in 0..cases {
        let g = gen::random_game(r, &shape);
        let step = || -> Result<Option<String>> {
            let d = decide_countable(&g, guards)?;
            let Some(pb) = d.strategy.filter(|_| d.holds) else {
                return Ok(None);
            };
            let verdicts = worst_against_opponents(&g, &pb.strategy, guards)?;
            let leak = verdicts.contains(&Cardinality::Uncountable);
            Ok(Some(if leak { "uncountable leak".to_string() } else { String::new() }))
        };
        match step() {
            Ok(None) => {}
            Ok(Some(msg)) if msg.is_empty() => rep.checked += 1,
            Ok(Some(msg)) => rep.fail(format!("case {case}: {msg} on {:?}", g.to_doc())),
            Err(e) => rep.error(case, e),
        }
    }
}

fn bounded_suite(r: &mut ChaCha8Rng, cases: usize, guards: &Guards, rep: &mut SuiteReport) {
    let shape = GameShape::cardinality();
    for case in 0..cases {
        let g = gen::random_game(r, &shape);
        let step = || -> Result<Vec<String>> {
            let mut problems = Vec::new();
            let countable = decide_countable(&g, guards)?.holds;
            let mut yes = Vec::new();
            for k in 0..=2u32 {
                let d = decide_bounded(&g, k, guards)?;
                if d.holds {
                    let sigma = &d.strategy.as_ref().expect("YES carries a strategy").strategy;
                    for v in worst_against_opponents(&g, sigma, guards)? {
                        if !matches!(v, Cardinality::Finite(n) if n <= u64::from(k)) {
                            problems.push(format!("bound {k} leaks {v}"));
                        }
                    }
                }
                yes.push(d.holds);
            }
            for k in 0..2 {
                if yes[k] && !yes[k + 1] {
                    problems.push(format!("YES({k}) but NO({})", k + 1));
                }
            }
            if yes[2] && !countable {
                problems.push("YES(2) but countable NO".into());
            }
            Ok(problems)
        };
        match step() {
            Ok(p) if p.is_empty() => rep.checked += 1,
            Ok(p) => rep.fail(format!("case {case}: {} on {:?}", p.join("; "), g.to_doc())),
            Err(e) => rep.error(case, e),
        }
    }
}

fn topology_suite(r: &mut ChaCha8Rng, cases: usize, guards: &Guards, rep: &mut SuiteReport) {
    let shape = GameShape::topology();
    for case in 0..cases {
        let g = gen::random_game(r, &shape);
        let step = || -> Result<Vec<String>> {
            let mut problems = Vec::new();
            let sure = solve_parity(&ParityGame::nature_as(&g, Player::Abelard)).winner == Player::Eloise;
            let a = alternate_normalize(&g)?;
            let sure_normalized =
                solve_parity(&ParityGame::nature_as(&a.game, Player::Abelard)).winner == Player::Eloise;
            if sure != sure_normalized {
                problems.push("normalization changed the sure winner".into());
            }
            let d = decide_topo_good(&g, guards)?;
            if sure && !d.holds {
                problems.push("sure win but not topologically good".into());
            }
            if d.holds {
                let sigma = &d.strategy.as_ref().expect("YES carries a strategy").strategy;
                let tau = MooreStrategy::lowest(Player::Abelard, &g);
                let o = restrict_by_strategies(&g, sigma, &tau)?;
                let succ = o.graph.adjacency();
                let all = vec![true; o.graph.len()];
                let mut even = vec![false; o.graph.len()];
                for (_, comp) in parity_traps(succ, o.graph.priorities(), &all, 0) {
                    for v in comp {
                        even[v] = true;
                    }
                }
                let hopeful = coreachable(succ, &even);
                let reach = o.graph.reachable();
                if let Some(u) = (0..o.graph.len()).find(|&u| reach[u] && !hopeful[u]) {
                    problems.push(format!("losing cone below {}", o.graph.label(u)));
                }
            }
            Ok(problems)
        };
        match step() {
            Ok(p) if p.is_empty() => rep.checked += 1,
            Ok(p) => rep.fail(format!("case {case}: {} on {:?}", p.join("; "), g.to_doc())),
            Err(e) => rep.error(case, e),
        }
    }
}

fn imperfect_suite(r: &mut ChaCha8Rng, cases: usize, guards: &Guards, rep: &mut SuiteReport) {
    for case in 0..cases {
        let a = gen::random_imperfect(r, 5, 2);
        let step = || -> Result<Option<bool>> {
            let hat = build_hat_imperfect(&a, guards)?;
            let Some(sigma) = solve_imperfect_bounded(&hat, 1, guards)? else {
                return Ok(None);
            };
            let source = a.unfold(&hat.project(&sigma))?;
            let eloise = MooreStrategy::lowest(Player::Eloise, &source);
            for tau in enumerate_strategies(&source, Player::Abelard, 2, guards)? {
                let o = restrict_by_strategies(&source, &eloise, &tau)?;
                if classify_losing_with(&o.graph, guards)?.verdict == Cardinality::Uncountable {
                    return Ok(Some(false));
                }
            }
            Ok(Some(true))
        };
        match step() {
            Ok(None) => {}
            Ok(Some(true)) => rep.checked += 1,
            Ok(Some(false)) => rep.fail(format!("case {case}: uncountable leak on {:?}", a.to_doc())),
            Err(e) => rep.error(case, e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_reproducible() {
        let g = Guards::default();
        for suite in Suite::ALL {
            let a = run_suite(suite, 7, 4, &g);
            let b = run_suite(suite, 7, 4, &g);
            assert_eq!(serde_json::to_value(&a).unwrap(), serde_json::to_value(&b).unwrap());
            assert!(a.passed(), "{a:?}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
    }
}
