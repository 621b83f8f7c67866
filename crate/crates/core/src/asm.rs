//! Artificial-free simplex phase 1 for primal feasibility.
//!
//! The slack basis is kept as is. Basic rows with a negative right-hand side
//! form the set `L` and are tagged `x⁻`; the feasibility row `w` is the sum of
//! those rows. Pricing on `w` and a two-sided ratio test (non-negative rows
//! limited by positive entries, `L` rows limited by negative entries) then
//! follow exactly the pivots of textbook phase 1 with one artificial per `L`
//! row, without ever storing an artificial column. When an `x⁻` row leaves,
//! the column it leaves behind is relabelled `x⁺` and its `w` entry gains `+1`.

use crate::scalar::Scalar;
use crate::tableau::{Dictionary, Label, Tag};
use crate::trace::{
    pick, pick_by_rule, Outcome, PivotStep, PivotTrace, Snapshot, Solution, SolveError,
    SolveOptions,
};

#[derive(Debug, Clone)]
pub struct AsmState<T> {
    dict: Dictionary<T>,
    /// `w[0]` is the feasibility objective value, `w[s + 1]` belongs to nonbasic position `s`.
    w: Vec<T>,
    trace: PivotTrace<T>,
    snapshots: Option<Vec<Snapshot<T>>>,
}

impl<T: Scalar> AsmState<T> {
    /// Tags every negative basic row `x⁻` and computes `w` over them.
    ///
    /// With no negative row the dictionary is already feasible and the state
    /// starts finished.
    pub fn new(mut dict: Dictionary<T>) -> Self {
        for r in 0..dict.num_basic() {
            if dict.rhs(r).is_neg() {
                dict.set_basic_tag(r, Tag::Minus);
            }
        }
        let w = column_sums_over_minus_rows(&dict);
        let mut trace = PivotTrace::new(dict.corner_point(), w[0].clone());
        if !dict.basic().iter().any(|l| l.tag == Tag::Minus) {
            trace.outcome = Some(Outcome::Feasible);
        }
        AsmState {
            dict,
            w,
            trace,
            snapshots: None,
        }
    }

    pub fn dict(&self) -> &Dictionary<T> {
        &self.dict
    }

    pub fn w(&self) -> &[T] {
        &self.w
    }

    pub fn trace(&self) -> &PivotTrace<T> {
        &self.trace
    }

    pub fn outcome(&self) -> Option<&Outcome<T>> {
        self.trace.outcome.as_ref()
    }

    pub fn is_finished(&self) -> bool {
        self.trace.outcome.is_some()
    }

    /// The set `L`: labels of `x⁻` rows, in row order.
    pub fn infeasible_rows(&self) -> Vec<Label> {
        self.dict
            .basic()
            .iter()
            .filter(|l| l.tag == Tag::Minus)
            .copied()
            .collect()
    }

    /// `Σ_{i∈L} d_ij` for every column including column 0, computed from scratch.
    pub fn recompute_w(&self) -> Vec<T> {
        column_sums_over_minus_rows(&self.dict)
    }

    /// Nonbasic position of the entering column, or `None` when no `w` entry is
    /// negative.
    pub fn select_entering(&self, rule: crate::trace::PivotRule) -> Option<usize> {
        let candidates = self
            .dict
            .nonbasic()
            .iter()
            .enumerate()
            .filter(|(s, _)| self.w[s + 1].is_neg())
            .map(|(s, l)| (s, self.w[s + 1].clone(), *l));
        pick_by_rule(rule, candidates)
    }

    /// Basic position of the leaving row for entering position `s`: minimum ratio
    /// `d_i0 / d_is` over feasible rows with `d_is > 0` and `x⁻` rows with `d_is < 0`.
    pub fn select_leaving(&self, s: usize) -> Result<usize, SolveError> {
        let d = &self.dict;
        let candidates = (0..d.num_basic()).filter_map(|r| {
            let label = d.basic()[r];
            let (rhs, a) = (d.rhs(r), d.coeff(r, s));
            let admissible = if label.tag == Tag::Minus {
                !rhs.is_pos() && a.is_neg()
            } else {
                !rhs.is_neg() && a.is_pos()
            };
            admissible.then(|| (r, rhs.clone() / a.clone(), label))
        });
        pick(candidates, |a: &T, b: &T| a.order(b)).ok_or(SolveError::NoLeavingRow {
            entering: d.nonbasic()[s],
        })
    }

    /// Pivots on `(r, s)`, carrying `w` along, and applies the `x⁻ → x⁺` swap when
    /// the leaving row was in `L`.
    pub fn step(&mut self, r: usize, s: usize) -> Result<(), SolveError> {
        if self.is_finished() {
            return Err(SolveError::Finished);
        }
        let leaving = self.dict.basic()[r];
        let entering = self.dict.nonbasic()[s];
        let prev_w0 = self.w[0].clone();
        let degenerate = self.dict.rhs(r).is_zero();

        let pivot_value = self.dict.pivot_with(r, s, &mut [&mut self.w], &mut [])?;
        if leaving.tag == Tag::Minus {
            self.w[s + 1] = self.w[s + 1].clone() + T::one();
            self.dict.set_nonbasic_tag(s, Tag::Plus);
        }

        let iteration = self.trace.steps.len() + 1;
        let w0 = self.w[0].clone();
        // The feasibility objective never decreases and moves on every non-degenerate pivot.
        let moved_right = if degenerate { w0 == prev_w0 } else { w0 > prev_w0 };
        if !moved_right || w0.is_pos() {
            return Err(SolveError::Invariant {
                iteration,
                detail: format!("w0 went from {prev_w0} to {w0} (degenerate: {degenerate})"),
            });
        }

        self.trace.steps.push(PivotStep {
            iteration,
            entering,
            leaving,
            pivot_value,
            corner: self.dict.corner_point(),
            w0,
        });
        if !self.dict.basic().iter().any(|l| l.tag == Tag::Minus) {
            self.trace.outcome = Some(Outcome::Feasible);
        }
        Ok(())
    }

    /// One pass of price, ratio test and pivot. Returns `false` once finished.
    pub fn iterate(&mut self, opts: &SolveOptions) -> Result<bool, SolveError> {
        if self.is_finished() {
            return Ok(false);
        }
        let Some(s) = self.select_entering(opts.rule) else {
            // Every L row already sits at zero: the basis is feasible as it stands.
            self.trace.outcome = Some(if self.w[0].is_zero() {
                Outcome::Feasible
            } else {
                Outcome::Infeasible {
                    certificate: self.w.clone(),
                }
            });
            self.record_snapshot(None);
            return Ok(false);
        };
        let r = self.select_leaving(s)?;
        self.record_snapshot(Some((r, s)));
        self.step(r, s)?;
        if opts.check_invariants {
            self.check_invariants()?;
        }
        if self.is_finished() {
            self.record_snapshot(None);
        }
        Ok(!self.is_finished())
    }

    /// `w` agrees with its recomputation, `L` rows are non-positive and all
    /// other rows non-negative.
    pub fn check_invariants(&self) -> Result<(), SolveError> {
        let iteration = self.trace.steps.len();
        let fresh = self.recompute_w();
        if fresh != self.w {
            return Err(SolveError::Invariant {
                iteration,
                detail: format!("maintained w {:?} differs from recomputed {:?}", self.w, fresh),
            });
        }
        for (r, label) in self.dict.basic().iter().enumerate() {
            let v = self.dict.rhs(r);
            let ok = if label.tag == Tag::Minus {
                !v.is_pos()
            } else {
                !v.is_neg()
            };
            if !ok {
                return Err(SolveError::Invariant {
                    iteration,
                    detail: format!("row {label} has value {v}"),
                });
            }
        }
        if self.dict.nonbasic().iter().any(|l| l.tag == Tag::Minus) {
            return Err(SolveError::Invariant {
                iteration,
                detail: "a minus-tagged label is nonbasic".into(),
            });
        }
        Ok(())
    }

    fn record_snapshot(&mut self, pivot: Option<(usize, usize)>) {
        let has_l = self.dict.basic().iter().any(|l| l.tag == Tag::Minus);
        if let Some(snaps) = self.snapshots.as_mut() {
            snaps.push(Snapshot {
                dict: self.dict.clone(),
                aux: has_l.then(|| self.w.clone()),
                pivot,
            });
        }
    }

    pub fn into_solution(self) -> Solution<T> {
        Solution {
            trace: self.trace,
            dict: self.dict,
            snapshots: self.snapshots.unwrap_or_default(),
        }
    }
}

fn column_sums_over_minus_rows<T: Scalar>(dict: &Dictionary<T>) -> Vec<T> {
    let mut w = vec![T::zero(); dict.num_nonbasic() + 1];
    for (r, label) in dict.basic().iter().enumerate() {
        if label.tag == Tag::Minus {
            for (acc, v) in w.iter_mut().zip(dict.row(r)) {
                *acc = acc.clone() + v.clone();
            }
        }
    }
    w
}

/// Runs the artificial-free phase 1 to completion (or the iteration cap).
pub fn solve<T: Scalar>(dict: Dictionary<T>, opts: &SolveOptions) -> Result<Solution<T>, SolveError> {
    let mut state = AsmState::new(dict);
    if opts.record_tableaux {
        state.snapshots = Some(Vec::new());
        if state.is_finished() {
            state.record_snapshot(None);
        }
    }
    if opts.check_invariants {
        state.check_invariants()?;
    }
    while !state.is_finished() {
        if state.trace.steps.len() >= opts.max_iters {
            state.trace.outcome = Some(Outcome::IterationCapExceeded);
            break;
        }
        state.iterate(opts)?;
    }
    Ok(state.into_solution())
}
