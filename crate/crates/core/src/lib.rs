//! Exact-arithmetic phase 1 for linear programs without artificial variables.
//!
//! * [`asm`] drives a dictionary to primal feasibility, pivot for pivot like
//!   textbook phase 1 but without artificial columns.
//! * [`asmd`] is the dual counterpart, driving a dictionary to dual feasibility.
//! * [`oracle`] is textbook phase 1 with explicit artificial variables, plus the
//!   path comparator used to check that the two primal methods agree.
//! * [`lp_io`] parses LP text, renders traces, generates random instances and
//!   hosts the command-line front end.
//!
//! Every routine is generic over [`Scalar`]; [`Rational`] gives exact results.

pub mod asm;
pub mod asmd;
pub mod cli;
pub mod lp_io;
pub mod oracle;
pub mod rational;
pub mod scalar;
pub mod tableau;
pub mod trace;

pub use rational::{Rational, RationalError};
pub use scalar::Scalar;
pub use tableau::{Classification, Dictionary, Label, LinearProgram, Tag, VarKind};
pub use trace::{
    Outcome, Path, PivotRule, PivotStep, PivotTrace, Snapshot, Solution, SolveError, SolveOptions,
};

pub type RatLinearProgram = LinearProgram<Rational>;
pub type RatDictionary = Dictionary<Rational>;
pub type RatSolution = Solution<Rational>;
pub type RatTrace = PivotTrace<Rational>;

pub type F64LinearProgram = LinearProgram<f64>;
pub type F64Dictionary = Dictionary<f64>;
pub type F64Solution = Solution<f64>;
