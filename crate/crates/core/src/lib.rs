//! Finite-control automata meet parametrically polymorphic type checking.
//!
//! The crate exposes five layers:
//!
//! * [`term`] — ranked trees and patterns with a hash-consing store;
//! * [`automata`] — a uniform simulator for automata with no storage, a
//!   pushdown, a tree, or a tape;
//! * [`typesys`] — programs of generic function definitions and the type
//!   checkers for three overloading modes;
//! * [`grammar`] — context-free grammars, Greibach normal form, and a CYK
//!   membership oracle;
//! * [`transforms`] — the constructive conversions between all of the
//!   above, with [`verify`] checking each one by exhaustive bisimulation.
//!
//! The `forge` binary wraps everything into a command-line workbench; see
//! the repository README for a tour.

pub mod automata;
pub mod cli;
pub mod emit;
pub mod fixtures;
pub mod grammar;
pub mod parse;
pub mod randgen;
pub mod term;
pub mod transforms;
pub mod typesys;
pub mod verify;

pub use automata::{AutomatonSpec, RunOptions, RunOutcome};
pub use term::{TermId, TermStore};
pub use typesys::{CheckOptions, CheckResult, Expr, Mode, TypeProgram};
