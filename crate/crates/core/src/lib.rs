//! Games played by Eloise and Abelard against Nature, an uncontrollable third
//! player. Two questions are decided by reduction to two-player parity games:
//! how many plays Eloise can be forced to lose (at most a given finite number,
//! or countably many), and whether her losing plays can be kept meager
//! (topologically small). Brute-force oracles cross-check every reduction.

pub mod cardinality;
pub mod classify;
pub mod condition;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod guard;
pub mod harness;
pub mod imperfect;
pub mod io;
pub mod oracle;
pub mod parity;
pub mod reduced;
pub mod topology;

pub use classify::{
    classify_losing, classify_winning, enumerate_losing_lassos, verify_witness, BranchCardinality, Cardinality,
    Lasso, Witness,
};
pub use error::{Error, Result};
pub use game::{
    enumerate_strategies, restrict_by_strategies, validate_game, Arena, Diagnostic, GameBuilder, MooreStrategy,
    NatureGame, OutcomeGraph, Owner, Player,
};
pub use graph::PointedGraph;
pub use guard::Guards;
pub use parity::{brute_solve, solve_parity, verify_sure, ParityGame, SolveResult};
pub use cardinality::{build_check, build_hat, decide_bounded, decide_countable, least_bound, pull_back};
pub use condition::{
    compile_check, compile_hat, compile_tilde, eval_on_lasso, product, Condition, EventGame, Flag, PriorityTransducer,
    ProductGame, ProductNode, StepEvent,
};
pub use reduced::{Decision, EdgeOrigin, PulledBack, ReducedGame, Role};
pub use topology::{alternate_normalize, build_tilde, decide_topo_good, AlternatingGame};
pub use imperfect::{
    build_hat_imperfect, build_tilde_imperfect, knowledge_construction, solve_imperfect_bounded,
    validate_imperfect, verify_obs_strategy, ImperfectArena, ImperfectGame, ObsStrategy,
};
