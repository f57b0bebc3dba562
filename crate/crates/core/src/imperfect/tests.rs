use super::*;
use crate::classify::{classify_losing, Cardinality};
use crate::fixtures;
use crate::game::{enumerate_strategies, restrict_by_strategies, MooreStrategy};
use crate::guard::Guards;
use crate::parity::solve_parity;
use crate::topology::decide_topo_good;

fn g() -> Guards {
    Guards::default()
}

fn action_at(game: &ImperfectGame, c: usize, pred: impl Fn(&GameAction) -> bool) -> usize {
    game.class_actions[c].iter().position(pred).expect("action present")
}

#[test]
fn fig7_round_trips_and_validates() {
    let a = fixtures::fig7();
    assert_eq!(a.len(), 9);
    assert_eq!(a.classes().len(), 5);
    assert_eq!(ImperfectArena::from_doc(&a.to_doc()).unwrap(), a);
    assert!(validate_imperfect(&fixtures::fig7_document()).is_empty());
}

#[test]
fn class_checks_report_once_per_class() {
    let mut doc = fixtures::fig7_document();
    doc.vertices.iter_mut().find(|v| v.id == "v1").unwrap().priority = 0;
    let d = validate_imperfect(&doc);
    assert_eq!(d.len(), 1, "{d:?}");
    assert_eq!(d[0].kind, "class-priority");

    let mut doc = fixtures::fig7_document();
    doc.observations.push(vec!["v".into(), "f".into()]);
    let d = validate_imperfect(&doc);
    assert_eq!(d.iter().map(|d| d.kind).collect::<Vec<_>>(), vec!["mixed-class", "class-priority"]);
}

#[test]
fn hat_action_alphabets() {
    let hat = build_hat_imperfect(&fixtures::fig7(), &g()).unwrap();
    let sizes: Vec<usize> = hat.class_actions.iter().map(Vec::len).collect();
    // {v}, {v0,v1}, {v00,..,v11}, {f}, {l}
    assert_eq!(sizes, vec![0, 4, 3, 1, 1]);
}

#[test]
fn fig7_hat_is_won_by_naming_the_avoided_bit() {
    let a = fixtures::fig7();
    let hat = build_hat_imperfect(&a, &g()).unwrap();
    let sigma = solve_imperfect_bounded(&hat, 1, &g()).unwrap().expect("winning strategy");
    let v = |id: &str| a.index_of(id).unwrap();
    let first = &hat.class_actions[1][sigma.next(0, 1).unwrap()];
    assert_eq!(
        first,
        &GameAction::Theta {
            action: 0,
            theta: vec![(v("v0"), v("v01")), (v("v1"), v("v10"))]
        }
    );
    let second = &hat.class_actions[2][sigma.next(0, 2).unwrap()];
    assert_eq!(second.source_action(), a.action_index("N").unwrap());
}

#[test]
fn always_guessing_zero_loses_the_hat_game() {
    let hat = build_hat_imperfect(&fixtures::fig7(), &g()).unwrap();
    let mut moves = vec![None, Some(0), None, Some(0), Some(0)];
    moves[2] = Some(action_at(&hat, 2, |x| x.source_action() == 1));
    assert!(!verify_obs_strategy(&hat, &ObsStrategy::positional(moves), &g()).unwrap());
}

#[test]
fn winning_hat_strategy_is_sound_for_the_source() {
    let a = fixtures::fig7();
    let hat = build_hat_imperfect(&a, &g()).unwrap();
    let sigma = solve_imperfect_bounded(&hat, 1, &g()).unwrap().unwrap();
    let source = a.unfold(&hat.project(&sigma)).unwrap();
    let eloise = MooreStrategy::lowest(Player::Eloise, &source);
    for tau in enumerate_strategies(&source, Player::Abelard, 1, &g()).unwrap() {
        let out = restrict_by_strategies(&source, &eloise, &tau).unwrap();
        assert_ne!(classify_losing(&out.graph).verdict, Cardinality::Uncountable);
    }
}

#[test]
fn fig7_one_player_is_topologically_good() {
    let a = fixtures::fig7_one_player();
    let tilde = build_tilde_imperfect(&a, &g()).unwrap();
    assert_eq!(tilde.len(), 36);
    assert!(solve_imperfect_bounded(&tilde, 1, &g()).unwrap().is_some());
    assert!(build_tilde_imperfect(&fixtures::fig7(), &g()).is_err());
}

#[test]
fn lifted_perfect_games_agree_with_the_perfect_decision() {
    for (game, expected) in [(fixtures::t1(), true), (fixtures::t2(), false)] {
        let lifted = ImperfectArena::from_perfect(&game);
        let tilde = build_tilde_imperfect(&lifted, &g()).unwrap();
        let found = solve_imperfect_bounded(&tilde, 1, &g()).unwrap().is_some();
        assert_eq!(found, expected);
        assert_eq!(decide_topo_good(&game, &g()).unwrap().holds, expected);
    }
}

#[test]
fn knowledge_of_fig7_is_lost_for_eloise() {
    let k = knowledge_construction(&fixtures::fig7().as_parity_game(), &g()).unwrap();
    let sol = solve_parity(&k.game);
    assert_eq!(sol.winner, Player::Abelard);
}

#[test]
fn knowledge_merges_indistinguishable_vertices() {
    let doc: crate::io::ImperfectDoc = serde_json::from_value(serde_json::json!({
        "vertices": [
            {"id": "a", "owner": "eloise", "priority": 0},
            {"id": "b", "owner": "eloise", "priority": 0}
        ],
        "actions": ["g"],
        "delta_e": [
            {"from": "a", "action": "g", "to": ["a", "b"]},
            {"from": "b", "action": "g", "to": ["a", "b"]}
        ],
        "delta_a": [],
        "observations": [["a", "b"]],
        "initial": "a"
    }))
    .unwrap();
    let a = ImperfectArena::from_doc(&doc).unwrap();
    let k = knowledge_construction(&a.as_parity_game(), &g()).unwrap();
    assert_eq!(k.sets_owned_by(Player::Eloise), 2);
    assert_eq!(solve_parity(&k.game).winner, Player::Eloise);
}

#[test]
fn identity_observation_gives_the_expanded_game() {
    for game in [fixtures::fig5(), fixtures::t1(), fixtures::t2(), fixtures::all_odd_clique()] {
        let a = ImperfectArena::from_perfect(&game);
        let k = knowledge_construction(&a.as_parity_game(), &g()).unwrap();
        let e = a.expanded_game().unwrap();
        assert_eq!(k.game.len(), e.len());
        assert_eq!(k.game.edge_count(), e.edge_count());
        assert_eq!(solve_parity(&k.game).winner, solve_parity(&e).winner);
    }
}

#[test]
fn flagged_objectives_are_rejected_by_the_knowledge_construction() {
    let hat = build_hat_imperfect(&fixtures::fig7(), &g()).unwrap();
    assert!(knowledge_construction(&hat, &g()).is_err());
}

fn with_priorities(p: u32) -> ImperfectArena {
    let mut doc = fixtures::fig7_document();
    doc.vertices.iter_mut().for_each(|v| v.priority = p);
    ImperfectArena::from_doc(&doc).unwrap()
}

#[test]
fn all_odd_arena_has_no_countable_strategy() {
    let hat = build_hat_imperfect(&with_priorities(1), &g()).unwrap();
    assert_eq!(solve_imperfect_bounded(&hat, 1, &g()).unwrap(), None);
}

#[test]
fn all_even_arena_is_won_by_every_legal_strategy() {
    let a = with_priorities(0);
    let game = a.as_parity_game();
    let k = game.class_count();
    let legal: Vec<Vec<Option<usize>>> = (0..k)
        .map(|c| {
            let members: Vec<usize> = (0..game.len()).filter(|&v| game.class_of[v] == c).collect();
            if members.iter().all(|&v| game.owners[v] == Player::Abelard) {
                return vec![None];
            }
            (0..game.class_actions[c].len())
                .filter(|&j| members.iter().all(|&v| !game.transitions[v][j].is_empty()))
                .map(Some)
                .collect()
        })
        .collect();
    let mut tried = 0;
    let mut counter = vec![0usize; k];
    loop {
        let moves = (0..k).map(|c| legal[c][counter[c]]).collect();
        assert!(verify_obs_strategy(&game, &ObsStrategy::positional(moves), &g()).unwrap());
        tried += 1;
        let Some(c) = (0..k).find(|&c| counter[c] + 1 < legal[c].len()) else { break };
        counter[c] += 1;
        counter[..c].iter_mut().for_each(|x| *x = 0);
    }
    assert_eq!(tried, legal.iter().map(Vec::len).product::<usize>());
}
