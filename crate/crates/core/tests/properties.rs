use std::collections::BTreeSet;

use naturegames::harness::{self, gen, Suite};
use naturegames::io::{GameDoc, VertexDoc};
use naturegames::oracle;
use naturegames::{
    brute_solve, build_hat, classify_losing, classify_winning, compile_check, compile_hat, compile_tilde,
    decide_countable, enumerate_strategies, eval_on_lasso, knowledge_construction, restrict_by_strategies,
    solve_parity, validate_game, verify_obs_strategy, verify_sure, verify_witness, Arena, Cardinality, Condition,
    Flag, Guards, ImperfectArena, MooreStrategy, NatureGame, Owner, ParityGame, Player, PointedGraph, StepEvent,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Raw arena data: owners, priorities and successor lists.
#[derive(Clone, Debug)]
struct Parts {
    owners: Vec<Owner>,
    priorities: Vec<u32>,
    succ: Vec<Vec<usize>>,
}

fn owner_strategy(owners: &'static [Owner]) -> impl Strategy<Value = Owner> {
    prop::sample::select(owners)
}

fn parts(max_n: usize, max_p: u32, max_deg: usize, owners: &'static [Owner]) -> impl Strategy<Value = Parts> {
    (1..=max_n).prop_flat_map(move |n| {
        let succ = prop::collection::vec(prop::collection::btree_set(0..n, 1..=max_deg.min(n)), n);
        (
            prop::collection::vec(owner_strategy(owners), n),
            prop::collection::vec(0..=max_p, n),
            succ,
        )
            .prop_map(|(owners, priorities, succ)| Parts {
                owners,
                priorities,
                succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            })
    })
}

const ALL: &[Owner] = &[Owner::Eloise, Owner::Abelard, Owner::Nature];
const TWO_PLAYER: &[Owner] = &[Owner::Eloise, Owner::Abelard];

fn game(p: &Parts) -> NatureGame {
    let ids = (0..p.owners.len()).map(|v| format!("v{v}")).collect();
    NatureGame::from_parts(ids, p.owners.clone(), p.succ.clone(), p.priorities.clone(), 0).unwrap()
}

fn parity(p: &Parts) -> ParityGame {
    ParityGame::from_nature_game(&game(p)).unwrap()
}

fn graph(p: &Parts) -> PointedGraph {
    PointedGraph::new(p.succ.clone(), p.priorities.clone(), 0).unwrap()
}

fn g() -> Guards {
    Guards::default()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

/// Vertex sequences of length `len` consistent with both strategies, computed
/// by stepping the two memories directly.
fn consistent_prefixes(
    g: &NatureGame,
    sigma: &MooreStrategy,
    tau: &MooreStrategy,
    len: usize,
) -> BTreeSet<Vec<usize>> {
    let mut frontier = vec![(vec![g.initial()], sigma.initial_memory(), tau.initial_memory())];
    for _ in 1..len {
        let mut next = Vec::new();
        for (path, me, ma) in frontier {
            let v = *path.last().unwrap();
            let targets: Vec<usize> = match g.owner(v) {
                Owner::Eloise => vec![sigma.next(me, v).unwrap()],
                Owner::Abelard => vec![tau.next(ma, v).unwrap()],
                Owner::Nature => g.successors(v).to_vec(),
            };
            for w in targets {
                let mut p = path.clone();
                p.push(w);
                next.push((p, sigma.up(me, w), tau.up(ma, w)));
            }
        }
        frontier = next;
    }
    frontier.into_iter().map(|(p, _, _)| p).collect()
}

fn outcome_prefixes(o: &naturegames::OutcomeGraph, states: &[usize], len: usize) -> BTreeSet<Vec<usize>> {
    let mut frontier = vec![vec![o.graph.point()]];
    for _ in 1..len {
        frontier = frontier
            .into_iter()
            .flat_map(|p| {
                let last = *p.last().unwrap();
                o.graph.successors(last).iter().map(move |&w| {
                    let mut q = p.clone();
                    q.push(w);
                    q
                })
            })
            .collect();
    }
    frontier.into_iter().map(|p| p.into_iter().map(|s| states[s]).collect()).collect()
}

fn flag_events(d: u32, flags: &'static [Flag]) -> impl Strategy<Value = StepEvent> {
    (0..=d, prop::sample::select(flags)).prop_map(|(c, f)| StepEvent::flagged(c, f))
}

fn hat_event(d: u32) -> BoxedStrategy<StepEvent> {
    prop_oneof![
        (0..=d).prop_map(StepEvent::enter),
        Just(StepEvent::gadget()),
        flag_events(d, &[Flag::Obey, Flag::Disobey]),
    ]
    .boxed()
}

fn check_event(d: u32) -> BoxedStrategy<StepEvent> {
    prop_oneof![
        (0..=d).prop_map(StepEvent::enter),
        Just(StepEvent::gadget()),
        flag_events(d, &[Flag::Zero]),
    ]
    .boxed()
}

/// Tilde plays alternate an Eloise step (top/bot) with an Abelard step
/// (deviate/follow).
fn tilde_rounds(d: u32, rounds: std::ops::RangeInclusive<usize>) -> BoxedStrategy<Vec<StepEvent>> {
    prop::collection::vec(
        (flag_events(d, &[Flag::Top, Flag::Bot]), flag_events(d, &[Flag::Deviate, Flag::Follow])),
        rounds,
    )
    .prop_map(|v| v.into_iter().flat_map(|(e, a)| [e, a]).collect())
    .boxed()
}

fn lasso(condition: Condition) -> BoxedStrategy<(u32, Vec<StepEvent>, Vec<StepEvent>)> {
    (0..=3u32)
        .prop_flat_map(move |d| {
            let (handle, lp) = match condition {
                Condition::Hat => (
                    prop::collection::vec(hat_event(d), 0..=6).boxed(),
                    prop::collection::vec(hat_event(d), 1..=6).boxed(),
                ),
                Condition::Check => (
                    prop::collection::vec(check_event(d), 0..=6).boxed(),
                    prop::collection::vec(check_event(d), 1..=6).boxed(),
                ),
                Condition::Tilde => (tilde_rounds(d, 0..=3), tilde_rounds(d, 1..=3)),
            };
            (Just(d), handle, lp)
        })
        .prop_filter("the loop enters a vertex", |(_, _, lp)| lp.iter().any(|e| e.entered.is_some()))
        .boxed()
}

fn transducer(condition: Condition, d: u32) -> naturegames::PriorityTransducer {
    match condition {
        Condition::Hat => compile_hat(d),
        Condition::Check => compile_check(d),
        Condition::Tilde => compile_tilde(d),
    }
}

fn lasso_property(condition: Condition, d: u32, handle: &[StepEvent], lp: &[StepEvent]) -> Result<(), TestCaseError> {
    let t = transducer(condition, d);
    let direct = oracle::holds(condition, handle, lp);
    prop_assert_eq!(eval_on_lasso(&t, handle, lp).unwrap(), direct);
    // Unrolling the loop once more or rotating it does not change the play.
    let mut longer = handle.to_vec();
    longer.extend_from_slice(lp);
    prop_assert_eq!(eval_on_lasso(&t, &longer, lp).unwrap(), direct);
    let mut rotated_handle = handle.to_vec();
    rotated_handle.push(lp[0]);
    let mut rotated = lp[1..].to_vec();
    rotated.push(lp[0]);
    if rotated.iter().any(|e| e.entered.is_some()) {
        prop_assert_eq!(eval_on_lasso(&t, &rotated_handle, &rotated).unwrap(), direct);
    }
    // Emitted priorities stay in range and states stay in bounds.
    let mut s = t.initial_state();
    for ev in handle.iter().chain(lp) {
        let (next, out) = t.step(s, ev).unwrap();
        prop_assert!((next as usize) < t.state_count());
        prop_assert!(out <= t.max_emission());
        s = next;
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn zielonka_matches_brute_force(p in parts(6, 3, 3, TWO_PLAYER)) {
        let pg = parity(&p);
        let fast = solve_parity(&pg);
        let slow = brute_solve(&pg, &g()).unwrap();
        prop_assert_eq!(&fast.region, &slow.region);
        let arena = game(&p);
        for player in [Player::Eloise, Player::Abelard] {
            let sigma = fast.strategy(player, &pg);
            for v in 0..p.owners.len() {
                if fast.region[v] == player {
                    prop_assert!(naturegames::parity::verify_sure_from(&arena, &sigma, v));
                }
            }
        }
    }

    #[test]
    fn shifting_priorities_by_two_keeps_winners(p in parts(6, 3, 3, TWO_PLAYER)) {
        let mut shifted = p.clone();
        shifted.priorities.iter_mut().for_each(|c| *c += 2);
        prop_assert_eq!(solve_parity(&parity(&p)).region, solve_parity(&parity(&shifted)).region);
    }

    #[test]
    fn swapping_players_swaps_regions(p in parts(6, 3, 3, TWO_PLAYER)) {
        let mut dual = p.clone();
        dual.priorities.iter_mut().for_each(|c| *c += 1);
        dual.owners.iter_mut().for_each(|o| {
            *o = if *o == Owner::Eloise { Owner::Abelard } else { Owner::Eloise }
        });
        let a = solve_parity(&parity(&p)).region;
        let b = solve_parity(&parity(&dual)).region;
        prop_assert!(a.iter().zip(&b).all(|(x, y)| *x == y.opponent()));
    }

    #[test]
    fn memoryless_strategy_count_is_product_of_degrees(p in parts(6, 2, 3, ALL)) {
        let arena = game(&p);
        let reach = naturegames::graph::reachable(&p.succ, [0]);
        for player in [Player::Eloise, Player::Abelard] {
            let expected: usize = (0..p.owners.len())
                .filter(|&v| reach[v] && p.owners[v] == player.owner())
                .map(|v| p.succ[v].len())
                .product();
            prop_assert_eq!(enumerate_strategies(&arena, player, 1, &g()).unwrap().len(), expected);
        }
    }

    #[test]
    fn validation_agrees_with_construction(
        p in parts(4, 3, 2, ALL),
        stray in prop::option::of((0..6usize, 0..6usize)),
        drop_edges_of in prop::option::of(0..4usize),
        duplicate in any::<bool>(),
        initial in 0..5usize,
    ) {
        let n = p.owners.len();
        let mut doc = GameDoc {
            vertices: (0..n)
                .map(|v| VertexDoc { id: format!("v{v}"), owner: Some(p.owners[v]), priority: p.priorities[v] })
                .collect(),
            edges: (0..n)
                .filter(|&v| Some(v) != drop_edges_of)
                .flat_map(|v| p.succ[v].iter().map(move |&w| (format!("v{v}"), format!("v{w}"))))
                .collect(),
            initial: format!("v{initial}"),
            provenance: None,
        };
        if let Some((a, b)) = stray {
            doc.edges.push((format!("v{a}"), format!("v{b}")));
        }
        if duplicate {
            let first = doc.vertices[0].clone();
            doc.vertices.push(first);
        }
        let diagnostics = validate_game(&doc);
        prop_assert_eq!(diagnostics.is_empty(), NatureGame::from_doc(&doc).is_ok(), "{:?}", diagnostics);
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn outcome_graph_paths_are_the_consistent_plays(
        p in parts(5, 2, 2, ALL),
        sigma_pick in any::<prop::sample::Index>(),
        tau_pick in any::<prop::sample::Index>(),
    ) {
        let arena = game(&p);
        let sigmas = enumerate_strategies(&arena, Player::Eloise, 2, &g()).unwrap();
        let taus = enumerate_strategies(&arena, Player::Abelard, 2, &g()).unwrap();
        let sigma = sigma_pick.get(&sigmas);
        let tau = tau_pick.get(&taus);
        let o = restrict_by_strategies(&arena, sigma, tau).unwrap();
        let states: Vec<usize> = o.states.iter().map(|s| s.0).collect();
        for len in [1, 4, 8] {
            prop_assert_eq!(outcome_prefixes(&o, &states, len), consistent_prefixes(&arena, sigma, tau, len));
        }
    }

    #[test]
    fn hat_game_has_one_gadget_per_nature_edge(p in parts(6, 3, 3, ALL)) {
        let arena = game(&p);
        let r = build_hat(&arena);
        let n = p.owners.len();
        let nature: Vec<usize> = (0..n).filter(|&v| p.owners[v] == Owner::Nature).collect();
        let gadgets: usize = nature.iter().map(|&v| p.succ[v].len()).sum();
        let squares: usize = nature.iter().map(|&v| p.succ[v].len().pow(2)).sum();
        let plain: usize = (0..n).filter(|&v| p.owners[v] != Owner::Nature).map(|v| p.succ[v].len()).sum();
        let abelard = p.owners.iter().filter(|&&o| o == Owner::Abelard).count();
        prop_assert_eq!(r.len(), n + gadgets);
        prop_assert_eq!(r.count_owned(Player::Abelard), abelard + gadgets);
        prop_assert_eq!(r.count_owned(Player::Eloise), n - abelard);
        prop_assert_eq!(r.edge_count(), plain + gadgets + squares);
    }

    #[test]
    fn classifier_verdicts_carry_valid_witnesses(p in parts(4, 2, 2, ALL)) {
        let gr = graph(&p);
        let lost = classify_losing(&gr);
        prop_assert!(verify_witness(&gr, &lost));
        let won = classify_winning(&gr);
        prop_assert!(verify_witness(&gr.shifted(), &won));
    }

    #[test]
    fn losing_and_winning_swap_under_priority_shift(p in parts(4, 2, 2, ALL)) {
        let mut shifted = p.clone();
        shifted.priorities.iter_mut().for_each(|c| *c += 1);
        prop_assert_eq!(classify_winning(&graph(&p)).verdict, classify_losing(&graph(&shifted)).verdict);
    }

    #[test]
    fn making_everything_even_loses_nothing(p in parts(4, 2, 2, ALL)) {
        let mut even = p.clone();
        even.priorities.iter_mut().for_each(|c| *c = 0);
        prop_assert_eq!(classify_losing(&graph(&even)).verdict, Cardinality::Finite(0));
    }

    #[test]
    fn hat_lassos_match_the_formula(l in lasso(Condition::Hat)) {
        lasso_property(Condition::Hat, l.0, &l.1, &l.2)?;
    }

    #[test]
    fn check_lassos_match_the_formula(l in lasso(Condition::Check)) {
        lasso_property(Condition::Check, l.0, &l.1, &l.2)?;
    }

    #[test]
    fn tilde_lassos_match_the_formula(l in lasso(Condition::Tilde)) {
        lasso_property(Condition::Tilde, l.0, &l.1, &l.2)?;
    }

    #[test]
    fn transducer_sizes(d in 0..8u32) {
        prop_assert_eq!(compile_hat(d).state_count(), d as usize + 2);
        prop_assert_eq!(compile_tilde(d).state_count(), d as usize + 2);
        prop_assert_eq!(compile_check(d).state_count(), 2);
        let neutral = compile_hat(d).neutral();
        prop_assert!(neutral > d && neutral % 2 == 0 && neutral <= d + 2);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn identity_observations_agree_with_perfect_information(
        p in parts(5, 3, 3, ALL),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 5),
    ) {
        let arena = game(&p);
        let a = ImperfectArena::from_perfect(&arena);
        let ig = a.as_parity_game();
        let n = p.owners.len();
        let mut moves = vec![None; ig.class_count()];
        let mut positional = vec![None; n];
        for v in 0..n {
            let c = ig.class_of[v];
            let enabled: Vec<usize> = (0..ig.class_actions[c].len())
                .filter(|&j| ig.transitions[v].get(j).is_some_and(|t| !t.is_empty()))
                .collect();
            match p.owners[v] {
                Owner::Eloise => {
                    let j = *picks[v].get(&enabled);
                    moves[c] = Some(j);
                    let name = &a.actions()[ig.class_actions[c][j].source_action()];
                    positional[v] = arena.index_of(name.strip_prefix("to:").unwrap());
                }
                Owner::Nature => moves[c] = Some(enabled[0]),
                Owner::Abelard => {}
            }
        }
        let obs = naturegames::ObsStrategy::positional(moves);
        let sigma = MooreStrategy::positional(Player::Eloise, positional);
        prop_assert_eq!(verify_obs_strategy(&ig, &obs, &g()).unwrap(), verify_sure(&arena, &sigma));
    }

    #[test]
    fn knowledge_game_of_identity_observations_keeps_the_winner(p in parts(5, 3, 3, ALL)) {
        let a = ImperfectArena::from_perfect(&game(&p));
        let k = knowledge_construction(&a.as_parity_game(), &g()).unwrap();
        let expanded = a.expanded_game().unwrap();
        prop_assert_eq!(solve_parity(&k.game).winner, solve_parity(&expanded).winner);
    }

    #[test]
    fn obs_strategy_check_matches_the_unfolded_game(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_imperfect(&mut rng, 5, 2);
        let ig = a.as_parity_game();
        let k = ig.class_count();
        // A positional strategy chosen by index over all class-action tuples.
        let sizes: Vec<usize> = (0..k).map(|c| ig.class_actions[c].len()).collect();
        let total: usize = sizes.iter().map(|&s| s.max(1)).product();
        let mut code = pick.index(total);
        let moves: Vec<Option<usize>> = sizes
            .iter()
            .map(|&s| {
                if s == 0 {
                    return None;
                }
                let d = code % s;
                code /= s;
                Some(d)
            })
            .collect();
        let obs = naturegames::ObsStrategy::positional(moves);
        let claimed = verify_obs_strategy(&ig, &obs, &g()).unwrap();
        let direct = match a.unfold(&ig.project(&obs)) {
            Ok(u) => {
                let nobody = MooreStrategy::positional(Player::Eloise, vec![None; u.len()]);
                verify_sure(&u, &nobody)
            }
            Err(_) => false,
        };
        prop_assert_eq!(claimed, direct);
    }

    #[test]
    fn positive_countable_answers_are_sound(p in parts(5, 3, 2, ALL)) {
        let arena = game(&p);
        let d = decide_countable(&arena, &g()).unwrap();
        if let Some(pb) = d.strategy.filter(|_| d.holds) {
            for tau in enumerate_strategies(&arena, Player::Abelard, 1, &g()).unwrap() {
                let o = restrict_by_strategies(&arena, &pb.strategy, &tau).unwrap();
                prop_assert_ne!(classify_losing(&o.graph).verdict, Cardinality::Uncountable);
            }
        }
    }
}

#[test]
fn harness_reports_are_deterministic() {
    let suites = [Suite::Parity, Suite::Transducer, Suite::Classifier, Suite::Imperfect];
    let a = harness::run(5, 20, &suites, &g());
    let b = harness::run(5, 20, &suites, &g());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.passed());
}

#[test]
fn surely_won_games_lose_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = gen::GameShape::cardinality();
    for _ in 0..200 {
        let arena = gen::random_game(&mut rng, &shape);
        let pg = ParityGame::nature_as(&arena, Player::Abelard);
        let solved = solve_parity(&pg);
        if solved.winner != Player::Eloise {
            continue;
        }
        let sigma = solved.strategy(Player::Eloise, &pg);
        for tau in enumerate_strategies(&arena, Player::Abelard, 1, &g()).unwrap() {
            let o = restrict_by_strategies(&arena, &sigma, &tau).unwrap();
            assert_eq!(classify_losing(&o.graph).verdict, Cardinality::Finite(0));
        }
    }
}
