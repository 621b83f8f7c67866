//! LP text input, trace output and random instances.

pub mod generate;
pub mod parse;
pub mod render;

pub use generate::{gen_infeasible_lp, gen_random_lp};
pub use parse::{normalize, parse_lp, read_lp, render_lp, LpError, ParsedLp, RawConstraint, Relation, Sense};
pub use render::{instance_digest, Format, MachineError, Method, OutcomeRecord, StepRecord, Table, TableRow, TraceDocument};
