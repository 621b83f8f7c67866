//! Artificial-free phase 1 for dual feasibility.
//!
//! Mirror image of [`crate::asm`]: nonbasic columns with a negative objective
//! entry form `K` (tagged `y⁻`), and the feasibility column `w'` is the negated
//! sum of those columns. The leaving row is the most negative `w'` entry, the
//! entering column comes from a two-sided maximum-ratio test, and when a `y⁻`
//! column enters, the row it now occupies is relabelled `y⁺` and its `w'`
//! entry gains `+1`.

use crate::scalar::Scalar;
use crate::tableau::{Dictionary, Label, Tag};
use crate::trace::{
    pick, pick_by_rule, Outcome, PivotRule, PivotStep, PivotTrace, Snapshot, Solution,
    SolveError, SolveOptions,
};

#[derive(Debug, Clone)]
pub struct AsmdState<T> {
    dict: Dictionary<T>,
    /// `w_prime[0]` sits in the objective row, `w_prime[r + 1]` in basic row `r`.
    w_prime: Vec<T>,
    trace: PivotTrace<T>,
    snapshots: Option<Vec<Snapshot<T>>>,
}

impl<T: Scalar> AsmdState<T> {
    pub fn new(mut dict: Dictionary<T>) -> Self {
        for s in 0..dict.num_nonbasic() {
            if dict.cost(s).is_neg() {
                dict.set_nonbasic_tag(s, Tag::Minus);
            }
        }
        let w_prime = negated_sums_over_minus_columns(&dict);
        let mut trace = PivotTrace::new(dict.corner_point(), w_prime[0].clone());
        if !dict.nonbasic().iter().any(|l| l.tag == Tag::Minus) {
            trace.outcome = Some(Outcome::Feasible);
        }
        AsmdState {
            dict,
            w_prime,
            trace,
            snapshots: None,
        }
    }

    pub fn dict(&self) -> &Dictionary<T> {
        &self.dict
    }

    pub fn w_prime(&self) -> &[T] {
        &self.w_prime
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

    /// The set `K`: labels of `y⁻` columns, in column order.
    pub fn infeasible_columns(&self) -> Vec<Label> {
        self.dict
            .nonbasic()
            .iter()
            .filter(|l| l.tag == Tag::Minus)
            .copied()
            .collect()
    }

    /// `-Σ_{k∈K} d_ik` for every row including row 0, computed from scratch.
    pub fn recompute_w_prime(&self) -> Vec<T> {
        negated_sums_over_minus_columns(&self.dict)
    }

    /// Basic position with the most negative `w'` entry, or `None` if there is none.
    pub fn select_leaving_row(&self, rule: PivotRule) -> Option<usize> {
        let candidates = self
            .dict
            .basic()
            .iter()
            .enumerate()
            .filter(|(r, _)| self.w_prime[r + 1].is_neg())
            .map(|(r, l)| (r, self.w_prime[r + 1].clone(), *l));
        pick_by_rule(rule, candidates)
    }

    /// Nonbasic position maximizing `d_0j / d_rj` over columns outside `K` with
    /// `d_0j ≥ 0, d_rj < 0` and columns in `K` with `d_0j ≤ 0, d_rj > 0`.
    pub fn select_entering_col(&self, r: usize) -> Result<usize, SolveError> {
        let d = &self.dict;
        let candidates = (0..d.num_nonbasic()).filter_map(|s| {
            let label = d.nonbasic()[s];
            let (cost, a) = (d.cost(s), d.coeff(r, s));
            let admissible = if label.tag == Tag::Minus {
                !cost.is_pos() && a.is_pos()
            } else {
                !cost.is_neg() && a.is_neg()
            };
            admissible.then(|| (s, cost.clone() / a.clone(), label))
        });
        pick(candidates, |a: &T, b: &T| b.order(a)).ok_or(SolveError::NoEnteringColumn {
            leaving: d.basic()[r],
        })
    }

    pub fn step(&mut self, r: usize, s: usize) -> Result<(), SolveError> {
        if self.is_finished() {
            return Err(SolveError::Finished);
        }
        let leaving = self.dict.basic()[r];
        let entering = self.dict.nonbasic()[s];
        let pivot_value = self
            .dict
            .pivot_with(r, s, &mut [], &mut [&mut self.w_prime])?;
        if entering.tag == Tag::Minus {
            self.w_prime[r + 1] = self.w_prime[r + 1].clone() + T::one();
            self.dict.set_basic_tag(r, Tag::Plus);
        }
        self.trace.steps.push(PivotStep {
            iteration: self.trace.steps.len() + 1,
            entering,
            leaving,
            pivot_value,
            corner: self.dict.corner_point(),
            w0: self.w_prime[0].clone(),
        });
        if !self.dict.nonbasic().iter().any(|l| l.tag == Tag::Minus) {
            self.trace.outcome = Some(Outcome::Feasible);
        }
        Ok(())
    }

    pub fn iterate(&mut self, opts: &SolveOptions) -> Result<bool, SolveError> {
        if self.is_finished() {
            return Ok(false);
        }
        let Some(r) = self.select_leaving_row(opts.rule) else {
            // All K columns already have a zero objective entry.
            self.trace.outcome = Some(if self.w_prime[0].is_zero() {
                Outcome::Feasible
            } else {
                Outcome::Infeasible {
                    certificate: self.w_prime.clone(),
                }
            });
            self.record_snapshot(None);
            return Ok(false);
        };
        let s = self.select_entering_col(r)?;
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

    /// `w'` agrees with its recomputation, `K` columns have `d_0j ≤ 0` and all
    /// other columns `d_0j ≥ 0`, and no basic label is `y⁻`.
    pub fn check_invariants(&self) -> Result<(), SolveError> {
        let iteration = self.trace.steps.len();
        let fresh = self.recompute_w_prime();
        if fresh != self.w_prime {
            return Err(SolveError::Invariant {
                iteration,
                detail: format!(
                    "maintained w' {:?} differs from recomputed {:?}",
                    self.w_prime, fresh
                ),
            });
        }
        for (s, label) in self.dict.nonbasic().iter().enumerate() {
            let v = self.dict.cost(s);
            let ok = if label.tag == Tag::Minus {
                !v.is_pos()
            } else {
                !v.is_neg()
            };
            if !ok {
                return Err(SolveError::Invariant {
                    iteration,
                    detail: format!("column {label} has objective entry {v}"),
                });
            }
        }
        if self.dict.basic().iter().any(|l| l.tag == Tag::Minus) {
            return Err(SolveError::Invariant {
                iteration,
                detail: "a minus-tagged label is basic".into(),
            });
        }
        Ok(())
    }

    fn record_snapshot(&mut self, pivot: Option<(usize, usize)>) {
        let has_k = self.dict.nonbasic().iter().any(|l| l.tag == Tag::Minus);
        if let Some(snaps) = self.snapshots.as_mut() {
            snaps.push(Snapshot {
                dict: self.dict.clone(),
                aux: has_k.then(|| self.w_prime.clone()),
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

fn negated_sums_over_minus_columns<T: Scalar>(dict: &Dictionary<T>) -> Vec<T> {
    let minus: Vec<usize> = (0..dict.num_nonbasic())
        .filter(|&s| dict.nonbasic()[s].tag == Tag::Minus)
        .collect();
    dict.entries()
        .iter()
        .map(|row| {
            minus
                .iter()
                .fold(T::zero(), |acc, &s| acc - row[s + 1].clone())
        })
        .collect()
}

/// Runs the dual artificial-free phase 1 to completion (or the iteration cap).
pub fn solve<T: Scalar>(dict: Dictionary<T>, opts: &SolveOptions) -> Result<Solution<T>, SolveError> {
    let mut state = AsmdState::new(dict);
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
