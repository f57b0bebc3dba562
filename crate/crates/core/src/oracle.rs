//! Direct evaluation of the composite winning conditions on lassos of step
//! events, written from their definitions and independent of the
//! transducers. Used by the test suites and the harness.

use crate::condition::{Condition, Flag, StepEvent};

fn min_entered(events: &[StepEvent]) -> Option<u32> {
    events.iter().filter_map(|e| e.entered).min()
}

fn even(p: Option<u32>) -> bool {
    p.is_some_and(|p| p % 2 == 0)
}

/// Parity of the entered priorities, or finitely many obey steps.
pub fn hat_holds(_handle: &[StepEvent], lp: &[StepEvent]) -> bool {
    let obey_forever = lp.iter().any(|e| e.has(Flag::Obey));
    !obey_forever || even(min_entered(lp))
}

/// No zero-event at all, or parity of the entered priorities.
pub fn check_holds(handle: &[StepEvent], lp: &[StepEvent]) -> bool {
    let zero = handle.iter().chain(lp).any(|e| e.has(Flag::Zero));
    !zero || even(min_entered(lp))
}

/// Infinitely many tops and parity, or finitely many tops and infinitely
/// many deviations.
pub fn tilde_holds(_handle: &[StepEvent], lp: &[StepEvent]) -> bool {
    let top = lp.iter().any(|e| e.has(Flag::Top));
    let deviate = lp.iter().any(|e| e.has(Flag::Deviate));
    (top && even(min_entered(lp))) || (!top && deviate)
}

pub fn holds(condition: Condition, handle: &[StepEvent], lp: &[StepEvent]) -> bool {
    match condition {
        Condition::Hat => hat_holds(handle, lp),
        Condition::Check => check_holds(handle, lp),
        Condition::Tilde => tilde_holds(handle, lp),
    }
}
