//! Temporal planning toolkit for socially aware task planning.
//!
//! The crate parses a PDDL 2.1 fragment (typed objects, numeric fluents,
//! durative actions with discrete effects), grounds it, plans with a forward
//! decision-epoch search, validates timed plans against the same semantics,
//! and simulates the resulting pleasure/arousal/dominance trajectories of
//! the children involved in the bundled toy-sorting scenario.

pub mod cli;
pub mod emotion;
pub mod grounding;
pub mod pddl;
pub mod plan;
pub mod planner;
pub mod state;
pub mod validator;

pub use pddl::{parse_domain, parse_problem, print_domain, print_problem, ParseError};
