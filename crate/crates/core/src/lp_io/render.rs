//! Trace documents and their two encodings: the human table layout and a
//! line-delimited JSON stream.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::lp_io::parse::render_lp;
use crate::oracle::OracleSolution;
use crate::rational::Rational;
use crate::tableau::{Dictionary, LinearProgram};
use crate::trace::{Outcome, Snapshot, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Asm,
    Asmd,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Asm => "asm",
            Method::Asmd => "asmd",
            Method::Oracle => "oracle",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "asm" => Ok(Method::Asm),
            "asmd" => Ok(Method::Asmd),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub rhs: Rational,
    pub entries: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<Rational>,
    /// Paired dual variable (ASMD only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// 0 for the initial table.
    pub iter: usize,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
    /// Heading of the appended column (`w'`), when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_name: Option<String>,
    /// (row, column) into `rows` and `entries`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_columns: Option<Vec<String>>,
}

impl Table {
    pub fn row(&self, label: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub iter: usize,
    pub entering: String,
    pub leaving: String,
    pub pivot: Rational,
    pub corner: Vec<Rational>,
    pub w0: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<Rational>>,
    pub solution: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceDocument {
    pub method: Method,
    pub digest: String,
    pub variables: Vec<String>,
    pub tables: Vec<Table>,
    pub steps: Vec<StepRecord>,
    pub outcome: OutcomeRecord,
}

/// SHA-256 of the canonical LP text.
pub fn instance_digest(lp: &LinearProgram<Rational>) -> String {
    let hash = Sha256::digest(render_lp(lp).as_bytes());
    hash.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn to_strings<X: fmt::Display>(xs: &[X]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn table_of(method: Method, iter: usize, snap: &Snapshot<Rational>) -> Table {
    let d: &Dictionary<Rational> = &snap.dict;
    let columns = to_strings(d.nonbasic());
    let mut rows = Vec::new();
    let offset;
    match method {
        Method::Asm | Method::Oracle => {
            if let Some(w) = &snap.aux {
                rows.push(TableRow {
                    label: "w".into(),
                    rhs: w[0].clone(),
                    entries: w[1..].to_vec(),
                    aux: None,
                    dual: None,
                });
            }
            offset = rows.len();
            for (r, label) in d.basic().iter().enumerate() {
                rows.push(TableRow {
                    label: label.to_string(),
                    rhs: d.rhs(r).clone(),
                    entries: d.row(r)[1..].to_vec(),
                    aux: None,
                    dual: None,
                });
            }
        }
        Method::Asmd => {
            let aux = |i: usize| snap.aux.as_ref().map(|w| w[i].clone());
            rows.push(TableRow {
                label: "z".into(),
                rhs: d.objective_value().clone(),
                entries: d.objective_row()[1..].to_vec(),
                aux: aux(0),
                dual: None,
            });
            offset = 1;
            for (r, label) in d.basic().iter().enumerate() {
                rows.push(TableRow {
                    label: label.without_tag().to_string(),
                    rhs: d.rhs(r).clone(),
                    entries: d.row(r)[1..].to_vec(),
                    aux: aux(r + 1),
                    dual: Some(label.dual_name()),
                });
            }
        }
    }
    let asmd = method == Method::Asmd;
    Table {
        iter,
        columns: if asmd {
            d.nonbasic().iter().map(|l| l.without_tag().to_string()).collect()
        } else {
            columns
        },
        rows,
        aux_name: (asmd && snap.aux.is_some()).then(|| "w'".to_string()),
        pivot: snap.pivot.map(|(r, s)| (r + offset, s)),
        dual_columns: asmd.then(|| d.nonbasic().iter().map(|l| l.dual_name()).collect()),
    }
}

impl TraceDocument {
    pub fn from_solution(
        method: Method,
        lp: &LinearProgram<Rational>,
        sol: &Solution<Rational>,
    ) -> Self {
        let tables = sol
            .snapshots
            .iter()
            .enumerate()
            .map(|(k, s)| table_of(method, k, s))
            .collect();
        let steps = sol
            .trace
            .steps
            .iter()
            .map(|s| StepRecord {
                iter: s.iteration,
                entering: s.entering.to_string(),
                leaving: s.leaving.to_string(),
                pivot: s.pivot_value.clone(),
                corner: s.corner.clone(),
                w0: s.w0.clone(),
            })
            .collect();
        let outcome = sol.outcome();
        let certificate = match outcome {
            Outcome::Infeasible { certificate } => Some(certificate.clone()),
            _ => None,
        };
        TraceDocument {
            method,
            digest: instance_digest(lp),
            variables: lp.var_names().to_vec(),
            tables,
            steps,
            outcome: OutcomeRecord {
                outcome: outcome.name().to_string(),
                certificate,
                solution: sol.trace.final_corner().to_vec(),
            },
        }
    }

    pub fn from_oracle(lp: &LinearProgram<Rational>, sol: &OracleSolution<Rational>) -> Self {
        Self::from_solution(Method::Oracle, lp, &sol.solution)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Machine => self.render_machine(),
        }
    }

    fn outcome_line(&self) -> String {
        let o = &self.outcome;
        let mut line = format!("outcome: {}", o.outcome);
        match (&o.certificate, o.outcome.as_str()) {
            (Some(c), _) => {
                let (w0, rest) = c.split_first().expect("certificate carries w0");
                let _ = write!(line, "; certificate: {w0} | {}", to_strings(rest).join(" "));
            }
            (None, "feasible") => {
                let _ = write!(line, "; solution: {}", to_strings(&self.outcome.solution).join(" "));
            }
            _ => {}
        }
        line
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "# {} {} ({})\n",
            self.method,
            self.digest,
            self.variables.join(" ")
        );
        if self.tables.is_empty() {
            for s in &self.steps {
                let _ = writeln!(
                    out,
                    "pivot {}: {} enters, {} leaves, pivot {}, corner ({}), w0 {}",
                    s.iter,
                    s.entering,
                    s.leaving,
                    s.pivot,
                    to_strings(&s.corner).join(", "),
                    s.w0
                );
            }
        }
        for t in &self.tables {
            if t.iter == 0 {
                out.push_str("Initial table:\n");
            } else {
                let _ = writeln!(out, "Iteration {}:", t.iter);
            }
            render_grid(&mut out, t);
        }
        out.push_str(&self.outcome_line());
        out.push('\n');
        out
    }

    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        let mut push = |r: &Record| {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        };
        push(&Record::Header {
            method: self.method,
            digest: self.digest.clone(),
            variables: self.variables.clone(),
        });
        let n = self.tables.len().max(self.steps.len());
        for k in 0..n {
            if let Some(t) = self.tables.get(k) {
                push(&Record::Table(t.clone()));
            }
            if let Some(s) = self.steps.get(k) {
                push(&Record::Step(s.clone()));
            }
        }
        push(&Record::Outcome(self.outcome.clone()));
        out
    }

    pub fn parse_machine(text: &str) -> Result<Self, MachineError> {
        let mut header = None;
        let mut tables = Vec::new();
        let mut steps = Vec::new();
        let mut outcome = None;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(line).map_err(|e| MachineError::Json {
                line: i + 1,
                message: e.to_string(),
            })?;
            let misplaced = |what: &str| MachineError::Structure(format!("line {}: {what}", i + 1));
            match rec {
                Record::Header { .. } if header.is_some() => return Err(misplaced("second header")),
                Record::Header {
                    method,
                    digest,
                    variables,
                } => header = Some((method, digest, variables)),
                _ if header.is_none() => return Err(misplaced("record before header")),
                _ if outcome.is_some() => return Err(misplaced("record after outcome")),
                Record::Table(t) => tables.push(t),
                Record::Step(s) => steps.push(s),
                Record::Outcome(o) => outcome = Some(o),
            }
        }
        let (method, digest, variables) =
            header.ok_or_else(|| MachineError::Structure("missing header".into()))?;
        let outcome = outcome.ok_or_else(|| MachineError::Structure("missing outcome".into()))?;
        Ok(TraceDocument {
            method,
            digest,
            variables,
            tables,
            steps,
            outcome,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MachineError {
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("{0}")]
    Structure(String),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum Record {
    Header {
        method: Method,
        digest: String,
        variables: Vec<String>,
    },
    Table(Table),
    Step(StepRecord),
    Outcome(OutcomeRecord),
}

/// Writes `label | b entries [| aux] [| dual]` rows with right-aligned numbers.
fn render_grid(out: &mut String, t: &Table) {
    let ncols = 1 + t.columns.len();
    let has_aux = t.aux_name.is_some();
    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut head: Vec<String> = vec![String::new(), "b".into()];
    head.extend(t.columns.iter().cloned());
    head.push(t.aux_name.clone().unwrap_or_default());
    head.push(String::new());
    grid.push(head);
    for (i, row) in t.rows.iter().enumerate() {
        let mut cells = vec![row.label.clone(), row.rhs.to_string()];
        for (j, v) in row.entries.iter().enumerate() {
            let star = if t.pivot == Some((i, j)) { "*" } else { "" };
            cells.push(format!("{v}{star}"));
        }
        cells.push(row.aux.as_ref().map(|v| v.to_string()).unwrap_or_default());
        cells.push(row.dual.clone().unwrap_or_default());
        grid.push(cells);
    }
    if let Some(duals) = &t.dual_columns {
        let mut foot = vec![String::new(), String::new()];
        foot.extend(duals.iter().cloned());
        foot.push(String::new());
        foot.push(String::new());
        grid.push(foot);
    }
    let width = |c: usize| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..grid[0].len()).map(width).collect();
    let has_dual = t.rows.iter().any(|r| r.dual.is_some());
    for row in &grid {
        let mut line = format!("{:<w$} |", row[0], w = widths[0]);
        for c in 1..=ncols {
            let _ = write!(line, " {:>w$}", row[c], w = widths[c]);
        }
        if has_aux {
            let _ = write!(line, " | {:>w$}", row[ncols + 1], w = widths[ncols + 1]);
        }
        if has_dual {
            let _ = write!(line, " | {}", row[ncols + 2]);
        }
        let mut line = line.trim_end();
        while let Some(rest) = line.strip_suffix(" |") {
            line = rest.trim_end();
        }
        out.push_str(line);
        out.push('\n');
    }
}
