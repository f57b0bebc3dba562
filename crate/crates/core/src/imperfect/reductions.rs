//! The hat and tilde constructions over imperfect-information arenas.
//! Eloise's decorated actions carry data for every vertex of the current
//! class where the action is enabled and which is reachable at all.

use super::game::{GameAction, ImperfectGame, LocalChoice, Objective};
use super::{check_len, precondition, ImperfectArena};
use crate::condition::{Flag, StepEvent};
use crate::error::Result;
use crate::game::{advance, Player};
use crate::guard::Guards;

/// Per class, the enabled source actions with the vertices they must
/// decorate.
fn domains(a: &ImperfectArena) -> Vec<Vec<(usize, Vec<usize>)>> {
    let reach = a.reachable();
    a.classes()
        .iter()
        .map(|class| {
            (0..a.actions().len())
                .filter_map(|g| {
                    let dom: Vec<usize> = class
                        .iter()
                        .copied()
                        .filter(|&v| reach[v] && a.owner(v) == Player::Eloise && !a.outcomes(v, g).is_empty())
                        .collect();
                    (!dom.is_empty()).then_some((g, dom))
                })
                .collect()
        })
        .collect()
}

/// Every combination of one option per domain vertex, lexicographically.
fn combinations<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let radices: Vec<usize> = options.iter().map(Vec::len).collect();
    if radices.contains(&0) {
        return Vec::new();
    }
    let mut digits = vec![0; radices.len()];
    let mut out = Vec::new();
    loop {
        out.push(digits.iter().zip(options).map(|(&d, o)| o[d].clone()).collect());
        if !advance(&mut digits, &radices) {
            return out;
        }
    }
}

fn class_actions<T: Clone>(
    a: &ImperfectArena,
    guards: &Guards,
    options: impl Fn(usize, usize) -> Vec<T>,
    make: impl Fn(usize, Vec<(usize, T)>) -> GameAction,
) -> Result<Vec<Vec<GameAction>>> {
    let doms = domains(a);
    let size: u128 = doms
        .iter()
        .flatten()
        .map(|(g, dom)| dom.iter().map(|&v| options(v, *g).len() as u128).product::<u128>())
        .sum();
    check_len("decorated actions", size, guards.strategies)?;
    Ok(doms
        .iter()
        .map(|acts| {
            acts.iter()
                .flat_map(|(g, dom)| {
                    let opts: Vec<Vec<T>> = dom.iter().map(|&v| options(v, *g)).collect();
                    combinations(&opts)
                        .into_iter()
                        .map(|pick| make(*g, dom.iter().copied().zip(pick).collect()))
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect())
}

fn class_names(a: &ImperfectArena) -> Vec<String> {
    (0..a.classes().len()).map(|c| a.class_name(c)).collect()
}

/// Eloise additionally names, per vertex of her class, the outcome to avoid;
/// any other outcome is an act of obedience by the adversary.
pub fn build_hat_imperfect(a: &ImperfectArena, guards: &Guards) -> Result<ImperfectGame> {
    let actions = class_actions(
        a,
        guards,
        |v, g| a.outcomes(v, g).to_vec(),
        |action, theta| GameAction::Theta { action, theta },
    )?;
    let n = a.len();
    let mut transitions = Vec::with_capacity(n);
    for v in 0..n {
        transitions.push(match a.owner(v) {
            Player::Abelard => vec![a
                .abelard_moves(v)
                .iter()
                .map(|&w| (w, StepEvent::enter(a.priority(w))))
                .collect()],
            Player::Eloise => actions[a.class_of(v)]
                .iter()
                .map(|act| {
                    let GameAction::Theta { action, theta } = act else {
                        unreachable!("hat actions are decorated")
                    };
                    match theta.iter().find(|(u, _)| *u == v) {
                        None => Vec::new(),
                        Some(&(_, avoid)) => a
                            .outcomes(v, *action)
                            .iter()
                            .map(|&w| {
                                let flag = if w == avoid { Flag::Disobey } else { Flag::Obey };
                                (w, StepEvent::flagged(a.priority(w), flag))
                            })
                            .collect(),
                    }
                })
                .collect(),
        });
    }
    Ok(ImperfectGame {
        ids: a.ids.clone(),
        owners: a.owners.clone(),
        priorities: a.priorities.clone(),
        class_of: a.class_of.clone(),
        class_names: class_names(a),
        class_actions: actions,
        transitions,
        initial: a.initial(),
        objective: Objective::Hat,
        source_ids: a.ids.clone(),
        source_actions: a.actions().to_vec(),
    })
}

const A: usize = 0;
const E: usize = 1;
const FRESH: usize = 0;
const NEXT: usize = 1;

fn tilde_index(v: usize, turn: usize, phase: usize) -> usize {
    v * 4 + turn * 2 + phase
}

/// The local-strategy game of a one-player arena. States are
/// `(v, X, x)`: at `X = A` the adversary picks the outcome and whether to
/// keep control; at `X = E` the local strategy for phase `x` moves and may
/// hand control back (the `top` flag), after which the phase is `n`.
pub fn build_tilde_imperfect(a: &ImperfectArena, guards: &Guards) -> Result<ImperfectGame> {
    if a.has_abelard() {
        return Err(precondition("the tilde construction needs an arena without Abelard vertices"));
    }
    let local_options = |v: usize, g: usize| {
        let single: Vec<(usize, bool)> = a.outcomes(v, g).iter().flat_map(|&w| [(w, true), (w, false)]).collect();
        let mut out = Vec::new();
        for &first in &single {
            for &next in &single {
                out.push(LocalChoice { first, next });
            }
        }
        out
    };
    let actions = class_actions(a, guards, local_options, |action, theta| GameAction::Local { action, theta })?;
    let n = a.len();
    let mut ids = Vec::with_capacity(4 * n);
    let mut transitions = Vec::with_capacity(4 * n);
    for v in 0..n {
        for turn in [A, E] {
            for phase in [FRESH, NEXT] {
                ids.push(format!(
                    "({},{},{})",
                    a.id(v),
                    if turn == A { "A" } else { "E" },
                    if phase == FRESH { "f" } else { "n" }
                ));
                let per_action = actions[a.class_of(v)].iter().map(|act| {
                    let GameAction::Local { action, theta } = act else {
                        unreachable!("tilde actions are decorated")
                    };
                    if turn == A {
                        let mut ts = Vec::new();
                        for &w in a.outcomes(v, *action) {
                            let ev = StepEvent::flagged(a.priority(w), Flag::Deviate);
                            ts.push((tilde_index(w, A, phase), ev));
                            ts.push((tilde_index(w, E, phase), ev));
                        }
                        ts
                    } else {
                        match theta.iter().find(|(u, _)| *u == v) {
                            None => Vec::new(),
                            Some((_, choice)) => {
                                let (w, top) = choice.pick(phase == FRESH);
                                if top {
                                    vec![(tilde_index(w, A, NEXT), StepEvent::flagged(a.priority(w), Flag::Top))]
                                } else {
                                    vec![(tilde_index(w, E, phase), StepEvent::flagged(a.priority(w), Flag::Follow))]
                                }
                            }
                        }
                    }
                });
                transitions.push(per_action.collect());
            }
        }
    }
    Ok(ImperfectGame {
        ids,
        owners: vec![Player::Eloise; 4 * n],
        priorities: (0..4 * n).map(|s| a.priority(s / 4)).collect(),
        class_of: (0..4 * n).map(|s| a.class_of(s / 4)).collect(),
        class_names: class_names(a),
        class_actions: actions,
        transitions,
        initial: tilde_index(a.initial(), A, FRESH),
        objective: Objective::Tilde,
        source_ids: a.ids.clone(),
        source_actions: a.actions().to_vec(),
    })
}
