//! Good-for-games ω-automata with state-based parity acceptance.
//!
//! * [`automaton`] and [`lasso`]: automata, size measures and acceptance of
//!   ultimately periodic words.
//! * [`sim`] and [`gfg`]: the simulation game, its solver and the positional
//!   certificate check; inclusion and GFG-equivalence built on top.
//! * [`reduction`]: nice graphs, vertex covers, the characteristic and
//!   adjusted languages and the cover automaton construction.
//! * [`minimizer`]: bounded guess-and-check search for small equivalent
//!   automata.
//! * [`format`] and [`report`]: text formats and run reports.

pub mod automaton;
mod digraph;
pub mod error;
pub mod format;
pub mod game;
pub mod gfg;
pub mod lasso;
pub mod minimizer;
pub mod reduction;
pub mod report;
pub mod sim;

pub use automaton::{Alphabet, Diagnostic, Kind, ParityAutomaton, Priority, StateRef, Symbol, Target};
pub use error::{Error, Result};
pub use gfg::{gfg_equivalent, includes, is_gfg_with_reference};
pub use lasso::{accepts_lasso, LassoWord};
pub use sim::{
    build_arena, check_positional_strategy, solve_verifier, PositionalStrategy, Position,
    SimulationArena,
};

/// Spelling of the stop symbol in automaton, graph and lasso files.
pub const NATURAL: &str = "#";
/// Accepted alias for [`NATURAL`] when parsing.
pub const NATURAL_ALIAS: &str = "♮";
