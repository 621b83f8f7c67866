//! Textbook phase 1 with explicit artificial variables, and the path comparator.
//!
//! Every constraint row with `b_i < 0` is negated and given a basic artificial
//! `a_i`; its slack becomes a nonbasic surplus. Phase 1 maximizes `-Σ a_i` with
//! Dantzig pricing, the ordinary minimum-ratio test and the same label-order
//! tie rule as [`crate::asm`]. An artificial that has left the basis is never
//! priced again but its column stays in the dictionary.

use crate::scalar::Scalar;
use crate::tableau::{Dictionary, Label, LinearProgram, VarKind};
use crate::trace::{
    pick, pick_by_rule, Outcome, Path, PivotStep, PivotTrace, Snapshot, Solution, SolveError,
    SolveOptions,
};

/// Auxiliary problem: the original rows, negated where `b_i < 0`, with one
/// artificial per negated row.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryProblem<T> {
    pub dict: Dictionary<T>,
    /// Phase-1 objective row for maximizing `-Σ a_i`, aligned with the dictionary columns.
    pub w_row: Vec<T>,
    /// Artificials introduced, one per row with negative right-hand side.
    pub artificials: Vec<Label>,
}

impl<T: Scalar> AuxiliaryProblem<T> {
    pub fn new(lp: &LinearProgram<T>) -> Self {
        let p = lp.num_vars();
        let negative: Vec<usize> = (0..lp.num_rows()).filter(|&i| lp.rhs()[i].is_neg()).collect();
        let surplus: Vec<Label> = negative.iter().map(|&i| Label::slack(p + i + 1)).collect();

        let mut nonbasic: Vec<Label> = (1..=p).map(Label::original).collect();
        nonbasic.extend(surplus.iter().copied());

        let mut top = vec![T::zero()];
        top.extend(lp.objective().iter().map(|c| -c.clone()));
        top.extend(surplus.iter().map(|_| T::zero()));
        let mut entries = vec![top];
        let mut basic = Vec::with_capacity(lp.num_rows());
        for (i, (row, bi)) in lp.matrix().iter().zip(lp.rhs()).enumerate() {
            let k = negative.iter().position(|&n| n == i);
            let mut r = Vec::with_capacity(nonbasic.len() + 1);
            match k {
                // a_i - a_i·x - s_i = -b_i
                Some(k) => {
                    basic.push(Label::artificial(p + i + 1));
                    r.push(-bi.clone());
                    r.extend(row.iter().map(|v| -v.clone()));
                    r.extend((0..surplus.len()).map(|q| if q == k { -T::one() } else { T::zero() }));
                }
                None => {
                    basic.push(Label::slack(p + i + 1));
                    r.push(bi.clone());
                    r.extend(row.iter().cloned());
                    r.extend(surplus.iter().map(|_| T::zero()));
                }
            }
            entries.push(r);
        }
        let dict = Dictionary::from_parts(basic, nonbasic, entries, p)
            .expect("auxiliary dictionary is well formed by construction");
        let w_row = phase1_row(&dict);
        let artificials = dict
            .basic()
            .iter()
            .filter(|l| l.kind == VarKind::Artificial)
            .copied()
            .collect();
        AuxiliaryProblem {
            dict,
            w_row,
            artificials,
        }
    }

    /// Sum of the artificial variables at the current basis.
    pub fn artificial_sum(&self) -> T {
        self.dict
            .basic()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.kind == VarKind::Artificial)
            .fold(T::zero(), |acc, (r, _)| acc + self.dict.rhs(r).clone())
    }
}

/// `-Σ a_i` written in the current nonbasic variables:
/// `w_j = -Σ_{basic a_i} d_ij`, plus 1 in the column of each nonbasic artificial.
fn phase1_row<T: Scalar>(dict: &Dictionary<T>) -> Vec<T> {
    let mut w = vec![T::zero(); dict.num_nonbasic() + 1];
    for (r, label) in dict.basic().iter().enumerate() {
        if label.kind == VarKind::Artificial {
            for (acc, v) in w.iter_mut().zip(dict.row(r)) {
                *acc = acc.clone() - v.clone();
            }
        }
    }
    for (s, label) in dict.nonbasic().iter().enumerate() {
        if label.kind == VarKind::Artificial {
            w[s + 1] = w[s + 1].clone() + T::one();
        }
    }
    w
}

/// Result of phase 1 with artificials.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution<T> {
    pub solution: Solution<T>,
    /// Degenerate pivots that drive zero-valued artificials out after phase 1.
    /// Not part of the phase-1 path.
    pub cleanup: Vec<PivotStep<T>>,
    /// Rows whose artificial stayed basic with no nonzero entry to pivot on; dropped.
    pub redundant_rows: Vec<Label>,
    /// Phase-1 optimum `Σ a_i`.
    pub phase1_value: T,
}

impl<T: Scalar> OracleSolution<T> {
    pub fn outcome(&self) -> &Outcome<T> {
        self.solution.outcome()
    }

    pub fn trace(&self) -> &PivotTrace<T> {
        &self.solution.trace
    }
}

struct Phase1<T> {
    aux: AuxiliaryProblem<T>,
    trace: PivotTrace<T>,
    snapshots: Option<Vec<Snapshot<T>>>,
}

impl<T: Scalar> Phase1<T> {
    fn entering(&self, opts: &SolveOptions) -> Option<usize> {
        let d = &self.aux.dict;
        let candidates = d
            .nonbasic()
            .iter()
            .enumerate()
            .filter(|(s, l)| l.kind != VarKind::Artificial && self.aux.w_row[s + 1].is_neg())
            .map(|(s, l)| (s, self.aux.w_row[s + 1].clone(), *l));
        pick_by_rule(opts.rule, candidates)
    }

    fn leaving(&self, s: usize) -> Result<usize, SolveError> {
        let d = &self.aux.dict;
        let candidates = (0..d.num_basic()).filter_map(|r| {
            let a = d.coeff(r, s);
            a.is_pos()
                .then(|| (r, d.rhs(r).clone() / a.clone(), d.basic()[r]))
        });
        pick(candidates, |a: &T, b: &T| a.order(b)).ok_or(SolveError::NoLeavingRow {
            entering: d.nonbasic()[s],
        })
    }

    fn check(&self) -> Result<(), SolveError> {
        let iteration = self.trace.steps.len();
        let fresh = phase1_row(&self.aux.dict);
        if fresh != self.aux.w_row {
            return Err(SolveError::Invariant {
                iteration,
                detail: format!(
                    "phase-1 row {:?} differs from recomputed {:?}",
                    self.aux.w_row, fresh
                ),
            });
        }
        if -self.aux.w_row[0].clone() != self.aux.artificial_sum() {
            return Err(SolveError::Invariant {
                iteration,
                detail: "phase-1 value differs from the sum of artificials".into(),
            });
        }
        if let Some(r) = (0..self.aux.dict.num_basic()).find(|&r| self.aux.dict.rhs(r).is_neg()) {
            return Err(SolveError::Invariant {
                iteration,
                detail: format!("basic {} is negative", self.aux.dict.basic()[r]),
            });
        }
        Ok(())
    }

    fn snapshot(&mut self, pivot: Option<(usize, usize)>) {
        if let Some(snaps) = self.snapshots.as_mut() {
            snaps.push(Snapshot {
                dict: self.aux.dict.clone(),
                aux: Some(self.aux.w_row.clone()),
                pivot,
            });
        }
    }

    fn pivot(&mut self, r: usize, s: usize) -> Result<PivotStep<T>, SolveError> {
        let leaving = self.aux.dict.basic()[r];
        let entering = self.aux.dict.nonbasic()[s];
        let pivot_value = self
            .aux
            .dict
            .pivot_with(r, s, &mut [&mut self.aux.w_row], &mut [])?;
        Ok(PivotStep {
            iteration: 0,
            entering,
            leaving,
            pivot_value,
            corner: self.aux.dict.corner_point(),
            w0: self.aux.w_row[0].clone(),
        })
    }
}

/// Runs phase 1 on the auxiliary problem.
///
/// On success the artificial columns are dropped, so the final dictionary is a
/// feasible dictionary of the original problem.
pub fn simplex_phase1<T: Scalar>(
    aux: AuxiliaryProblem<T>,
    opts: &SolveOptions,
) -> Result<OracleSolution<T>, SolveError> {
    let trace = PivotTrace::new(aux.dict.corner_point(), aux.w_row[0].clone());
    let mut ph = Phase1 {
        aux,
        trace,
        snapshots: opts.record_tableaux.then(Vec::new),
    };
    if opts.check_invariants {
        ph.check()?;
    }
    loop {
        if ph.trace.steps.len() >= opts.max_iters {
            ph.trace.outcome = Some(Outcome::IterationCapExceeded);
            break;
        }
        let Some(s) = ph.entering(opts) else {
            ph.snapshot(None);
            ph.trace.outcome = Some(if ph.aux.w_row[0].is_zero() {
                Outcome::Feasible
            } else {
                Outcome::Infeasible {
                    certificate: ph.aux.w_row.clone(),
                }
            });
            break;
        };
        let r = ph.leaving(s)?;
        ph.snapshot(Some((r, s)));
        let mut step = ph.pivot(r, s)?;
        step.iteration = ph.trace.steps.len() + 1;
        ph.trace.steps.push(step);
        if opts.check_invariants {
            ph.check()?;
        }
    }

    let phase1_value = ph.aux.artificial_sum();
    let mut cleanup = Vec::new();
    let mut redundant_rows = Vec::new();
    if ph.trace.outcome == Some(Outcome::Feasible) {
        let mut r = 0;
        while r < ph.aux.dict.num_basic() {
            if ph.aux.dict.basic()[r].kind != VarKind::Artificial {
                r += 1;
                continue;
            }
            let d = &ph.aux.dict;
            let target = pick(
                (0..d.num_nonbasic())
                    .filter(|&s| {
                        d.nonbasic()[s].kind != VarKind::Artificial && !d.coeff(r, s).is_zero()
                    })
                    .map(|s| (s, T::zero(), d.nonbasic()[s])),
                |a: &T, b: &T| a.order(b),
            );
            match target {
                Some(s) => {
                    let mut step = ph.pivot(r, s)?;
                    step.iteration = cleanup.len() + 1;
                    cleanup.push(step);
                    r += 1;
                }
                None => redundant_rows.push(ph.aux.dict.remove_row(r)),
            }
        }
        let mut s = 0;
        while s < ph.aux.dict.num_nonbasic() {
            if ph.aux.dict.nonbasic()[s].kind == VarKind::Artificial {
                ph.aux.dict.remove_column(s);
                ph.aux.w_row.remove(s + 1);
            } else {
                s += 1;
            }
        }
    }

    Ok(OracleSolution {
        solution: Solution {
            trace: ph.trace,
            dict: ph.aux.dict,
            snapshots: ph.snapshots.unwrap_or_default(),
        },
        cleanup,
        redundant_rows,
        phase1_value,
    })
}

/// Builds the auxiliary problem and runs phase 1.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>, opts: &SolveOptions) -> Result<OracleSolution<T>, SolveError> {
    simplex_phase1(AuxiliaryProblem::new(lp), opts)
}

/// Comparison of two phase-1 paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathReport<T> {
    pub equal: bool,
    /// Index into the visited-corner lists where they first differ; when the
    /// corners agree but the pivots do not, the index of the first differing pivot.
    pub first_divergence: Option<usize>,
    pub corners_a: Vec<Vec<T>>,
    pub corners_b: Vec<Vec<T>>,
    pub pivots_a: Option<Vec<(Label, Label)>>,
    pub pivots_b: Option<Vec<(Label, Label)>>,
}

fn first_mismatch<X: PartialEq>(a: &[X], b: &[X]) -> Option<usize> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .or_else(|| (a.len() != b.len()).then(|| a.len().min(b.len())))
}

/// Compares visited corners and, when both paths carry them, the label-normalized
/// pivot sequences.
pub fn compare_paths<T: Scalar>(a: &Path<T>, b: &Path<T>) -> PathReport<T> {
    let corner_div = first_mismatch(&a.corners, &b.corners);
    let pivot_div = match (&a.pivots, &b.pivots) {
        (Some(pa), Some(pb)) => first_mismatch(pa, pb),
        _ => None,
    };
    PathReport {
        equal: corner_div.is_none() && pivot_div.is_none(),
        first_divergence: corner_div.or(pivot_div),
        corners_a: a.corners.clone(),
        corners_b: b.corners.clone(),
        pivots_a: a.pivots.clone(),
        pivots_b: b.pivots.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational};

    fn lp(a: &[&[i64]], b: &[i64]) -> LinearProgram<Rational> {
        let p = a.first().map_or(0, |r| r.len());
        LinearProgram::with_default_names(
            vec![Rational::from(0); p],
            a.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect(),
            b.iter().map(|&v| v.into()).collect(),
        )
        .unwrap()
    }

    fn four_rows() -> LinearProgram<Rational> {
        lp(&[&[-1, -1], &[-1, -2], &[1, -1], &[-5, -2]], &[-4, -6, 2, -10])
    }

    fn corners(v: &[&[&str]]) -> Vec<Vec<Rational>> {
        v.iter().map(|c| c.iter().map(|s| rat(s)).collect()).collect()
    }

    #[test]
    fn auxiliary_four_rows() {
        let aux = AuxiliaryProblem::new(&four_rows());
        let arts: Vec<String> = aux.artificials.iter().map(|l| l.to_string()).collect();
        assert_eq!(arts, ["a3", "a4", "a6"]);
        assert_eq!(aux.artificial_sum(), rat("20"));
        assert_eq!(aux.w_row[..3], [rat("-20"), rat("-7"), rat("-5")]);
        assert_eq!(aux.w_row[3..], [rat("1"), rat("1"), rat("1")]);
    }

    #[test]
    fn auxiliary_trivial_cases() {
        assert!(AuxiliaryProblem::new(&lp(&[&[1, 1]], &[2])).artificials.is_empty());
        let one = AuxiliaryProblem::new(&lp(&[&[1]], &[-5]));
        assert_eq!(one.artificials.len(), 1);
        assert_eq!(one.artificial_sum(), rat("5"));
    }

    #[test]
    fn phase1_four_rows_path() {
        let sol = solve(&four_rows(), &SolveOptions::default()).unwrap();
        assert_eq!(sol.outcome(), &Outcome::Feasible);
        assert_eq!(sol.phase1_value, rat("0"));
        assert_eq!(
            sol.trace().path().corners,
            corners(&[&["0", "0"], &["2", "0"], &["1", "5/2"], &["2/3", "10/3"]])
        );
        assert!(sol.cleanup.is_empty());
        assert!(sol
            .solution
            .dict
            .nonbasic()
            .iter()
            .all(|l| l.kind != VarKind::Artificial));
        assert!(sol.solution.dict.classify().primal_feasible);
    }

    #[test]
    fn phase1_infeasible() {
        let sol = solve(&lp(&[&[1]], &[-1]), &SolveOptions::default()).unwrap();
        assert!(matches!(sol.outcome(), Outcome::Infeasible { .. }));
        assert_eq!(sol.phase1_value, rat("1"));
    }

    #[test]
    fn degenerate_artificial_is_driven_out() {
        // x1 ≤ 1, -x1 ≤ -1: the ratio tie goes to the slack x2, leaving a3 basic at zero.
        let sol = solve(&lp(&[&[1], &[-1]], &[1, -1]), &SolveOptions::default()).unwrap();
        assert_eq!(sol.outcome(), &Outcome::Feasible);
        assert_eq!(sol.phase1_value, rat("0"));
        assert_eq!(sol.trace().len(), 1);
        assert_eq!(sol.cleanup.len(), 1);
        assert!(sol.redundant_rows.is_empty());
        let d = &sol.solution.dict;
        assert!(d.basic().iter().all(|l| l.kind != VarKind::Artificial));
        assert_eq!(d.corner_point(), vec![rat("1")]);

        let asm = crate::asm::solve(
            Dictionary::from_lp(&lp(&[&[1], &[-1]], &[1, -1])),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(asm.outcome(), &Outcome::Feasible);
        assert!(compare_paths(&asm.trace.path(), &sol.trace().path()).equal);
    }

    #[test]
    fn compare_against_detour_fixture() {
        let sol = solve(&four_rows(), &SolveOptions::default()).unwrap();
        let detour = Path::from_corners(corners(&[&["0", "0"], &["2", "0"], &["3", "1"], &["10/3", "4/3"]]));
        let report = compare_paths(&sol.trace().path(), &detour);
        assert!(!report.equal);
        assert_eq!(report.first_divergence, Some(2));
    }

    #[test]
    fn compare_empty_traces() {
        let a = crate::asm::solve(
            Dictionary::from_lp(&lp(&[&[1]], &[1])),
            &SolveOptions::default(),
        )
        .unwrap();
        let b = solve(&lp(&[&[1]], &[1]), &SolveOptions::default()).unwrap();
        let report = compare_paths(&a.trace.path(), &b.trace().path());
        assert!(report.equal);
        assert_eq!(report.first_divergence, None);
    }

    #[test]
    fn compare_detects_pivot_only_difference() {
        let mut a = Path::from_corners(corners(&[&["0"]]));
        let mut b = a.clone();
        a.pivots = Some(vec![(Label::original(1), Label::slack(2))]);
        b.pivots = Some(vec![(Label::original(1), Label::slack(3))]);
        let report = compare_paths(&a, &b);
        assert!(!report.equal);
        assert_eq!(report.first_divergence, Some(0));
    }
}
