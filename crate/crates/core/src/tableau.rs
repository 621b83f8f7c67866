//! Dictionaries (simplex tableaux in the Chvátal layout) and the pivot operation.
//!
//! A dictionary for basis `B` stores the matrix
//!
//! ```text
//!         | col 0   | nonbasic columns
//! row 0   | z       | -c
//! rows B  | b       | A
//! ```
//!
//! so that every basic row reads `x_i + Σ_j d_ij x_j = d_i0` and the objective
//! row reads `z + Σ_j d_0j x_j = d_00`. Setting the nonbasic variables to zero
//! gives the basic solution `x_B = d_B0`.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("pivot entry at basic position {row}, nonbasic position {col} is zero")]
    ZeroPivot { row: usize, col: usize },
    #[error("position ({row}, {col}) is outside a {rows}x{cols} dictionary")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("inconsistent shape: {0}")]
    Shape(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
}

/// Canonical problem `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    c: Vec<T>,
    a: Vec<Vec<T>>,
    b: Vec<T>,
    var_names: Vec<String>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(
        c: Vec<T>,
        a: Vec<Vec<T>>,
        b: Vec<T>,
        var_names: Vec<String>,
    ) -> Result<Self, TableauError> {
        let p = c.len();
        if var_names.len() != p {
            return Err(TableauError::Shape(format!(
                "{} names for {p} variables",
                var_names.len()
            )));
        }
        if a.len() != b.len() {
            return Err(TableauError::Shape(format!(
                "{} constraint rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        if let Some(row) = a.iter().find(|row| row.len() != p) {
            return Err(TableauError::Shape(format!(
                "constraint row of length {} for {p} variables",
                row.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &var_names {
            if !seen.insert(name.as_str()) {
                return Err(TableauError::DuplicateName(name.clone()));
            }
        }
        Ok(LinearProgram { c, a, b, var_names })
    }

    /// Variables named `x1..xp`.
    pub fn with_default_names(c: Vec<T>, a: Vec<Vec<T>>, b: Vec<T>) -> Result<Self, TableauError> {
        let names = (1..=c.len()).map(|j| format!("x{j}")).collect();
        Self::new(c, a, b, names)
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.c
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.a
    }

    pub fn rhs(&self) -> &[T] {
        &self.b
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    /// `Ax ≤ b` and `x ≥ 0`, checked exactly.
    pub fn is_feasible_point(&self, x: &[T]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_neg())
            && self.a.iter().zip(&self.b).all(|(row, bi)| {
                let lhs = row
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (aij, xj)| acc + aij.clone() * xj.clone());
                lhs <= *bi
            })
    }

    /// Appends a constraint row `row · x ≤ rhs`.
    pub fn push_row(&mut self, row: Vec<T>, rhs: T) -> Result<(), TableauError> {
        if row.len() != self.num_vars() {
            return Err(TableauError::Shape(format!(
                "constraint row of length {} for {} variables",
                row.len(),
                self.num_vars()
            )));
        }
        self.a.push(row);
        self.b.push(rhs);
        Ok(())
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LinearProgram<U> {
        LinearProgram {
            c: self.c.iter().map(&f).collect(),
            a: self
                .a
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
            b: self.b.iter().map(&f).collect(),
            var_names: self.var_names.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Original,
    Slack,
    Artificial,
}

/// Sign tag distinguishing `x⁻` / `x⁺` (or `y⁻` / `y⁺`) from an untagged variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Plain,
    Minus,
    Plus,
}

impl Tag {
    pub fn suffix(self) -> &'static str {
        match self {
            Tag::Plain => "",
            Tag::Minus => "-",
            Tag::Plus => "+",
        }
    }
}

/// Identity of a variable in a dictionary.
///
/// `index` is the global 1-based variable number: originals are `1..=p`,
/// the slack of constraint row `i` is `p + i`. An artificial variable carries
/// the number of the slack whose row it was added to, so `a3` pairs with `x3`.
/// The deterministic tie rule orders labels by this number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Label {
    pub kind: VarKind,
    pub index: usize,
    pub tag: Tag,
}

impl Label {
    pub fn original(index: usize) -> Self {
        Label {
            kind: VarKind::Original,
            index,
            tag: Tag::Plain,
        }
    }

    pub fn slack(index: usize) -> Self {
        Label {
            kind: VarKind::Slack,
            index,
            tag: Tag::Plain,
        }
    }

    pub fn artificial(index: usize) -> Self {
        Label {
            kind: VarKind::Artificial,
            index,
            tag: Tag::Plain,
        }
    }

    pub fn with_tag(self, tag: Tag) -> Self {
        Label { tag, ..self }
    }

    /// Position in the global variable order used to break ties.
    pub fn order_key(&self) -> usize {
        self.index
    }

    pub fn without_tag(self) -> Self {
        self.with_tag(Tag::Plain)
    }

    /// Same variable, ignoring the sign tag.
    pub fn same_var(&self, other: &Label) -> bool {
        self.kind == other.kind && self.index == other.index
    }

    /// Name of the paired dual variable, e.g. `y3-`.
    pub fn dual_name(&self) -> String {
        format!("y{}{}", self.index, self.tag.suffix())
    }

    /// Parses the rendered form (`x3`, `x3-`, `x3+`, `a3`).
    ///
    /// `num_originals` decides whether an `x` label is an original or a slack.
    pub fn parse(text: &str, num_originals: usize) -> Option<Label> {
        let (body, tag) = if let Some(b) = text.strip_suffix('-') {
            (b, Tag::Minus)
        } else if let Some(b) = text.strip_suffix('+') {
            (b, Tag::Plus)
        } else {
            (text, Tag::Plain)
        };
        if let Some(n) = body.strip_prefix('a') {
            let index = n.parse().ok()?;
            return (tag == Tag::Plain).then_some(Label::artificial(index));
        }
        let index: usize = body.strip_prefix('x')?.parse().ok()?;
        let kind = if index == 0 {
            return None;
        } else if index <= num_originals {
            VarKind::Original
        } else {
            VarKind::Slack
        };
        Some(Label { kind, index, tag })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.kind {
            VarKind::Artificial => format!("a{}", self.index),
            _ => format!("x{}{}", self.index, self.tag.suffix()),
        };
        f.pad(&s)
    }
}

/// Simplex dictionary `D(B)` with labelled rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary<T> {
    basic: Vec<Label>,
    nonbasic: Vec<Label>,
    d: Vec<Vec<T>>,
    num_originals: usize,
}

/// Feasibility flags of a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Classification {
    pub primal_feasible: bool,
    pub dual_feasible: bool,
    pub optimal: bool,
    pub primal_inconsistent: bool,
    pub dual_inconsistent: bool,
}

impl<T: Scalar> Dictionary<T> {
    /// Slack basis of `Ax + x_slack = b`: row 0 is `[0 | -cᵀ]`, rows are `[b | A]`.
    pub fn from_lp(lp: &LinearProgram<T>) -> Self {
        let p = lp.num_vars();
        let mut d = Vec::with_capacity(lp.num_rows() + 1);
        let mut top = vec![T::zero()];
        top.extend(lp.objective().iter().map(|c| -c.clone()));
        d.push(top);
        for (row, bi) in lp.matrix().iter().zip(lp.rhs()) {
            let mut r = vec![bi.clone()];
            r.extend(row.iter().cloned());
            d.push(r);
        }
        Dictionary {
            basic: (1..=lp.num_rows()).map(|i| Label::slack(p + i)).collect(),
            nonbasic: (1..=p).map(Label::original).collect(),
            d,
            num_originals: p,
        }
    }

    /// Assembles a dictionary from explicit parts.
    ///
    /// `entries` has `basic.len() + 1` rows of `nonbasic.len() + 1` entries.
    pub fn from_parts(
        basic: Vec<Label>,
        nonbasic: Vec<Label>,
        entries: Vec<Vec<T>>,
        num_originals: usize,
    ) -> Result<Self, TableauError> {
        if entries.len() != basic.len() + 1 {
            return Err(TableauError::Shape(format!(
                "{} rows for {} basic labels",
                entries.len(),
                basic.len()
            )));
        }
        if entries.iter().any(|r| r.len() != nonbasic.len() + 1) {
            return Err(TableauError::Shape(format!(
                "row length differs from {} nonbasic labels plus one",
                nonbasic.len()
            )));
        }
        let all: Vec<&Label> = basic.iter().chain(&nonbasic).collect();
        for (i, l) in all.iter().enumerate() {
            if all[..i].iter().any(|o| o.same_var(l)) {
                return Err(TableauError::Shape(format!("label {l} appears twice")));
            }
        }
        Ok(Dictionary {
            basic,
            nonbasic,
            d: entries,
            num_originals,
        })
    }

    pub fn num_basic(&self) -> usize {
        self.basic.len()
    }

    pub fn num_nonbasic(&self) -> usize {
        self.nonbasic.len()
    }

    pub fn num_originals(&self) -> usize {
        self.num_originals
    }

    pub fn basic(&self) -> &[Label] {
        &self.basic
    }

    pub fn nonbasic(&self) -> &[Label] {
        &self.nonbasic
    }

    /// Raw entry `d_ij` with row 0 the objective and column 0 the right-hand side.
    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.d[i][j]
    }

    /// Row of the basic variable at position `r` (0-based), including column 0.
    pub fn row(&self, r: usize) -> &[T] {
        &self.d[r + 1]
    }

    pub fn objective_row(&self) -> &[T] {
        &self.d[0]
    }

    /// All rows, objective first.
    pub fn entries(&self) -> &[Vec<T>] {
        &self.d
    }

    /// Value of the basic variable at position `r`.
    pub fn rhs(&self, r: usize) -> &T {
        &self.d[r + 1][0]
    }

    /// Entry of basic position `r` in nonbasic position `s`.
    pub fn coeff(&self, r: usize, s: usize) -> &T {
        &self.d[r + 1][s + 1]
    }

    /// Objective-row entry of nonbasic position `s`.
    pub fn cost(&self, s: usize) -> &T {
        &self.d[0][s + 1]
    }

    pub fn objective_value(&self) -> &T {
        &self.d[0][0]
    }

    pub fn basic_position(&self, label: &Label) -> Option<usize> {
        self.basic.iter().position(|l| l.same_var(label))
    }

    pub fn nonbasic_position(&self, label: &Label) -> Option<usize> {
        self.nonbasic.iter().position(|l| l.same_var(label))
    }

    pub fn set_basic_tag(&mut self, r: usize, tag: Tag) {
        self.basic[r].tag = tag;
    }

    pub fn set_nonbasic_tag(&mut self, s: usize, tag: Tag) {
        self.nonbasic[s].tag = tag;
    }

    fn check_position(&self, r: usize, s: usize) -> Result<(), TableauError> {
        if r >= self.basic.len() || s >= self.nonbasic.len() {
            return Err(TableauError::OutOfRange {
                row: r,
                col: s,
                rows: self.basic.len(),
                cols: self.nonbasic.len(),
            });
        }
        Ok(())
    }

    /// Pivots on basic position `r` and nonbasic position `s`, exchanging the two
    /// labels (tags travel with them). Returns the pivot entry.
    pub fn pivot(&mut self, r: usize, s: usize) -> Result<T, TableauError> {
        self.pivot_with(r, s, &mut [], &mut [])
    }

    /// Value-returning form of [`Dictionary::pivot`].
    pub fn pivoted(&self, r: usize, s: usize) -> Result<Self, TableauError> {
        let mut next = self.clone();
        next.pivot(r, s)?;
        Ok(next)
    }

    /// Pivots and transforms auxiliary rows (aligned with columns `0..=n`) and
    /// auxiliary columns (aligned with rows `0..=m`) by the same formulas, as if
    /// they were part of the matrix.
    pub fn pivot_with(
        &mut self,
        r: usize,
        s: usize,
        extra_rows: &mut [&mut Vec<T>],
        extra_cols: &mut [&mut Vec<T>],
    ) -> Result<T, TableauError> {
        self.check_position(r, s)?;
        let (pr, pc) = (r + 1, s + 1);
        let p = self.d[pr][pc].clone();
        if p.is_zero() {
            return Err(TableauError::ZeroPivot { row: r, col: s });
        }
        debug_assert!(extra_rows.iter().all(|e| e.len() == self.d[0].len()));
        debug_assert!(extra_cols.iter().all(|e| e.len() == self.d.len()));

        let old_col: Vec<T> = self.d.iter().map(|row| row[pc].clone()).collect();

        // Auxiliary columns need the pivot column as it was before the update.
        for col in extra_cols.iter_mut() {
            let scaled = col[pr].clone() / p.clone();
            for (i, v) in col.iter_mut().enumerate() {
                if i == pr {
                    *v = scaled.clone();
                } else if !old_col[i].is_zero() {
                    *v = v.clone() - old_col[i].clone() * scaled.clone();
                }
            }
        }

        let pivot_row: Vec<T> = self.d[pr]
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if j == pc {
                    T::one() / p.clone()
                } else {
                    v.clone() / p.clone()
                }
            })
            .collect();

        let update = |row: &mut Vec<T>| {
            let f = row[pc].clone();
            if f.is_zero() {
                return;
            }
            for (j, v) in row.iter_mut().enumerate() {
                if j == pc {
                    *v = -(f.clone() / p.clone());
                } else if !pivot_row[j].is_zero() {
                    *v = v.clone() - f.clone() * pivot_row[j].clone();
                }
            }
        };

        for (i, row) in self.d.iter_mut().enumerate() {
            if i != pr {
                update(row);
            }
        }
        for row in extra_rows.iter_mut() {
            update(row);
        }
        self.d[pr] = pivot_row;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
        Ok(p)
    }

    pub fn classify(&self) -> Classification {
        let primal_feasible = (0..self.num_basic()).all(|r| !self.rhs(r).is_neg());
        let dual_feasible = (0..self.num_nonbasic()).all(|s| !self.cost(s).is_neg());
        let primal_inconsistent = (0..self.num_basic()).any(|r| {
            self.rhs(r).is_neg() && (0..self.num_nonbasic()).all(|s| !self.coeff(r, s).is_neg())
        });
        let dual_inconsistent = (0..self.num_nonbasic()).any(|s| {
            !self.cost(s).is_pos() && (0..self.num_basic()).all(|r| self.coeff(r, s).is_neg())
        });
        Classification {
            primal_feasible,
            dual_feasible,
            optimal: primal_feasible && dual_feasible,
            primal_inconsistent,
            dual_inconsistent,
        }
    }

    /// Values of the original variables in the basic solution `x_N = 0, x_B = d_B0`.
    pub fn corner_point(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.num_originals];
        for (r, label) in self.basic.iter().enumerate() {
            if label.kind == VarKind::Original {
                x[label.index - 1] = self.rhs(r).clone();
            }
        }
        x
    }

    /// Value of any variable in the basic solution (zero when nonbasic or absent).
    pub fn value_of(&self, label: &Label) -> T {
        self.basic_position(label)
            .map(|r| self.rhs(r).clone())
            .unwrap_or_else(T::zero)
    }

    /// Drops the basic row at position `r` (used for redundant rows).
    pub fn remove_row(&mut self, r: usize) -> Label {
        self.d.remove(r + 1);
        self.basic.remove(r)
    }

    /// Drops the nonbasic column at position `s`.
    pub fn remove_column(&mut self, s: usize) -> Label {
        for row in &mut self.d {
            row.remove(s + 1);
        }
        self.nonbasic.remove(s)
    }
}
