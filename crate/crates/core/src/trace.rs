//! Pivot traces, solver options and errors shared by the three phase-1 methods.

use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::tableau::{Dictionary, Label, TableauError, Tag, VarKind};

pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// Entering-variable pricing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Most negative feasibility-objective entry, ties to the lowest label.
    #[default]
    Dantzig,
    /// Lowest label with a negative entry (anti-cycling; may change the path).
    Bland,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub max_iters: usize,
    pub rule: PivotRule,
    /// Recompute the feasibility objective from scratch after every pivot and
    /// fail on any disagreement or broken sign invariant.
    pub check_invariants: bool,
    /// Keep a copy of every dictionary for table rendering.
    pub record_tableaux: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iters: DEFAULT_MAX_ITERS,
            rule: PivotRule::Dantzig,
            check_invariants: true,
            record_tableaux: false,
        }
    }
}

impl SolveOptions {
    pub fn with_tableaux(mut self) -> Self {
        self.record_tableaux = true;
        self
    }

    pub fn with_rule(mut self, rule: PivotRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("no admissible leaving row for entering column {entering}")]
    NoLeavingRow { entering: Label },
    #[error("no admissible entering column for leaving row {leaving}")]
    NoEnteringColumn { leaving: Label },
    #[error("invariant violated after iteration {iteration}: {detail}")]
    Invariant { iteration: usize, detail: String },
    #[error("solver already finished")]
    Finished,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<T> {
    /// Primal (ASM, oracle) or dual (ASMD) feasibility reached.
    Feasible,
    /// The final feasibility row (ASM, oracle) or column (ASMD), whose signs
    /// prove that no feasible basis exists.
    Infeasible { certificate: Vec<T> },
    IterationCapExceeded,
}

impl<T> Outcome<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Feasible => "feasible",
            Outcome::Infeasible { .. } => "infeasible",
            Outcome::IterationCapExceeded => "iteration-cap-exceeded",
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotStep<T> {
    /// 1-based.
    pub iteration: usize,
    /// Labels as they were tagged just before the pivot.
    pub entering: Label,
    pub leaving: Label,
    pub pivot_value: T,
    /// Original-variable values after the pivot.
    pub corner: Vec<T>,
    /// Feasibility-objective value after the pivot.
    pub w0: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotTrace<T> {
    pub initial_corner: Vec<T>,
    pub initial_w0: T,
    pub steps: Vec<PivotStep<T>>,
    /// `None` while a solve is still in progress.
    pub outcome: Option<Outcome<T>>,
}

impl<T: Scalar> PivotTrace<T> {
    pub fn new(initial_corner: Vec<T>, initial_w0: T) -> Self {
        PivotTrace {
            initial_corner,
            initial_w0,
            steps: Vec::new(),
            outcome: None,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Corner after every pivot, starting with the initial one.
    pub fn corners(&self) -> Vec<Vec<T>> {
        std::iter::once(self.initial_corner.clone())
            .chain(self.steps.iter().map(|s| s.corner.clone()))
            .collect()
    }

    pub fn w0_sequence(&self) -> Vec<T> {
        std::iter::once(self.initial_w0.clone())
            .chain(self.steps.iter().map(|s| s.w0.clone()))
            .collect()
    }

    pub fn final_corner(&self) -> &[T] {
        self.steps
            .last()
            .map(|s| s.corner.as_slice())
            .unwrap_or(&self.initial_corner)
    }

    /// Visited corner points (consecutive repeats from degenerate pivots merged)
    /// and the label-normalized pivot sequence.
    pub fn path(&self) -> Path<T> {
        Path {
            corners: dedup_corners(self.corners()),
            pivots: Some(
                self.steps
                    .iter()
                    .map(|s| (normalize_label(s.entering), normalize_label(s.leaving)))
                    .collect(),
            ),
        }
    }
}

/// Maps an artificial `a_i` to the slack `x_i` it stands in for and drops sign tags,
/// so that pivots of the artificial-free and the artificial-variable methods compare.
pub fn normalize_label(label: Label) -> Label {
    let kind = match label.kind {
        VarKind::Artificial => VarKind::Slack,
        k => k,
    };
    Label {
        kind,
        index: label.index,
        tag: Tag::Plain,
    }
}

pub(crate) fn dedup_corners<T: PartialEq>(mut corners: Vec<Vec<T>>) -> Vec<Vec<T>> {
    corners.dedup();
    corners
}

/// A sequence of visited corners, optionally with the pivots that produced it.
/// Fixture paths (known only by their corners) have `pivots: None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path<T> {
    pub corners: Vec<Vec<T>>,
    pub pivots: Option<Vec<(Label, Label)>>,
}

impl<T: PartialEq> Path<T> {
    pub fn from_corners(corners: Vec<Vec<T>>) -> Self {
        Path {
            corners: dedup_corners(corners),
            pivots: None,
        }
    }
}

/// Snapshot of a dictionary during a solve, for table rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub dict: Dictionary<T>,
    /// Feasibility row `w` (ASM, oracle) or column `w'` (ASMD), when present.
    pub aux: Option<Vec<T>>,
    /// Next pivot as (basic position, nonbasic position), if one follows.
    pub pivot: Option<(usize, usize)>,
}

/// Final state of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub trace: PivotTrace<T>,
    pub dict: Dictionary<T>,
    pub snapshots: Vec<Snapshot<T>>,
}

impl<T: Scalar> Solution<T> {
    pub fn outcome(&self) -> &Outcome<T> {
        self.trace
            .outcome
            .as_ref()
            .expect("a finished solve always has an outcome")
    }
}

/// Picks the best candidate `(position, key, label)`: smallest key under `order`,
/// ties to the lowest label in the global variable order.
pub(crate) fn pick<T: Scalar>(
    candidates: impl IntoIterator<Item = (usize, T, Label)>,
    order: impl Fn(&T, &T) -> Ordering,
) -> Option<usize> {
    candidates
        .into_iter()
        .min_by(|(_, ka, la), (_, kb, lb)| {
            order(ka, kb).then_with(|| la.order_key().cmp(&lb.order_key()))
        })
        .map(|(pos, _, _)| pos)
}

/// Entering/leaving choice among `(position, key, label)` with the configured rule.
/// Dantzig takes the smallest key; Bland ignores the key and takes the lowest label.
pub(crate) fn pick_by_rule<T: Scalar>(
    rule: PivotRule,
    candidates: impl IntoIterator<Item = (usize, T, Label)>,
) -> Option<usize> {
    match rule {
        PivotRule::Dantzig => pick(candidates, |a: &T, b: &T| a.order(b)),
        PivotRule::Bland => pick(candidates, |_: &T, _: &T| Ordering::Equal),
    }
}
