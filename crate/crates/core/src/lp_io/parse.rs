//! LP text format.
//!
//! ```text
//! # comment
//! max: 5 x1 - 2 x2 + 7 x3;
//! -8 x1 + x2 - 5 x3 >= 6;
//! x1 + 2/3 x2 <= 4;
//! x1 = 3;
//! ```
//!
//! The first statement is the objective (`max:` or `min:`), every further
//! `;`-terminated statement a constraint `<linear expr> <= | >= | = <rational>`.
//! A term is `[sign] [coefficient] name` with the coefficient defaulting to 1.
//! Only integers and `p/q` fractions are accepted; variables are implicitly
//! non-negative.

use std::fmt::Write as _;

use thiserror::Error;

use crate::rational::{Rational, RationalError};
use crate::tableau::{LinearProgram, TableauError};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: decimal literal `{text}` is not accepted; write it as a fraction p/q")]
    DecimalLiteral { line: usize, col: usize, text: String },
    #[error("{line}:{col}: unknown relation `{text}` (expected <=, >= or =)")]
    UnknownRelation { line: usize, col: usize, text: String },
    #[error("{line}:{col}: constraint has no nonzero coefficient")]
    EmptyConstraint { line: usize, col: usize },
    #[error("{line}:{col}: {source}")]
    Number {
        line: usize,
        col: usize,
        source: RationalError,
    },
    #[error(transparent)]
    Shape(#[from] TableauError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// One parsed constraint, coefficients merged per name in first-appearance order.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConstraint {
    pub coeffs: Vec<(String, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedLp {
    pub sense: Sense,
    pub objective: Vec<(String, Rational)>,
    pub constraints: Vec<RawConstraint>,
    /// Every variable name in order of first appearance.
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Colon,
    Semi,
    Rel(Relation),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, LpError> {
    let mut out = Vec::new();
    for (li, raw_line) in text.lines().enumerate() {
        let line = li + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line, col });
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/') {
                    i += 1;
                }
                // An exponent glued to digits (1e3) is a decimal too.
                if i < chars.len()
                    && (chars[i] == 'e' || chars[i] == 'E')
                    && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())
                {
                    let text: String = chars[start..i + 2].iter().collect();
                    return Err(LpError::DecimalLiteral { line, col, text });
                }
                let text: String = chars[start..i].iter().collect();
                let value = text.parse::<Rational>().map_err(|e| match e {
                    RationalError::DecimalLiteral(text) => LpError::DecimalLiteral { line, col, text },
                    source => LpError::Number { line, col, source },
                })?;
                out.push(Spanned {
                    tok: Tok::Num(value),
                    line,
                    col,
                });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    col,
                });
            } else if "<>=!≤≥".contains(c) {
                let start = i;
                while i < chars.len() && "<>=!≤≥".contains(chars[i]) {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let rel = match text.as_str() {
                    "<=" | "≤" => Relation::Le,
                    ">=" | "≥" => Relation::Ge,
                    "=" => Relation::Eq,
                    _ => return Err(LpError::UnknownRelation { line, col, text }),
                };
                out.push(Spanned {
                    tok: Tok::Rel(rel),
                    line,
                    col,
                });
            } else {
                return Err(LpError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    names: Vec<String>,
}

/// A linear expression: named terms plus a constant.
struct Expr {
    terms: Vec<(String, Rational)>,
    constant: Rational,
    constant_at: Option<(usize, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn error<X>(&self, message: impl Into<String>) -> Result<X, LpError> {
        let (line, col) = self.here();
        Err(LpError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LpError> {
        match self.peek() {
            Some(s) if s.tok == want => {
                self.pos += 1;
                Ok(())
            }
            Some(s) => {
                let found = describe(&s.tok);
                self.error(format!("expected {what}, found {found}"))
            }
            None => self.error(format!("expected {what}, found end of input")),
        }
    }

    fn note_name(&mut self, name: &str) {
        if !self.names.iter().any(|n| n == name) {
            self.names.push(name.to_string());
        }
    }

    fn expr(&mut self) -> Result<Expr, LpError> {
        let mut e = Expr {
            terms: Vec::new(),
            constant: Rational::zero(),
            constant_at: None,
        };
        let mut first = true;
        loop {
            let mut negative = false;
            let mut saw_sign = false;
            match self.peek().map(|s| &s.tok) {
                Some(Tok::Plus) => {
                    saw_sign = true;
                    self.pos += 1;
                }
                Some(Tok::Minus) => {
                    saw_sign = true;
                    negative = true;
                    self.pos += 1;
                }
                _ if !first => break,
                _ => {}
            }
            let at = self.here();
            let coeff = match self.peek().map(|s| &s.tok) {
                Some(Tok::Num(v)) => {
                    let v = v.clone();
                    self.pos += 1;
                    Some(v)
                }
                _ => None,
            };
            let name = match self.peek().map(|s| &s.tok) {
                Some(Tok::Ident(n)) => {
                    let n = n.clone();
                    self.pos += 1;
                    Some(n)
                }
                _ => None,
            };
            let value = coeff.clone().unwrap_or_else(Rational::one);
            let value = if negative { -value } else { value };
            match (coeff.is_some(), name) {
                (_, Some(name)) => {
                    self.note_name(&name);
                    match e.terms.iter_mut().find(|(n, _)| *n == name) {
                        Some((_, v)) => *v += value,
                        None => e.terms.push((name, value)),
                    }
                }
                (true, None) => {
                    e.constant += value;
                    e.constant_at.get_or_insert(at);
                }
                (false, None) => {
                    if saw_sign || first {
                        return self.error("expected a term");
                    }
                    break;
                }
            }
            first = false;
        }
        Ok(e)
    }

    fn objective(&mut self) -> Result<(Sense, Vec<(String, Rational)>), LpError> {
        let sense = match self.bump() {
            Some(Tok::Ident(k)) if k.eq_ignore_ascii_case("max") || k.eq_ignore_ascii_case("maximize") => Sense::Max,
            Some(Tok::Ident(k)) if k.eq_ignore_ascii_case("min") || k.eq_ignore_ascii_case("minimize") => Sense::Min,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return self.error("expected `max:` or `min:` objective");
            }
        };
        self.expect(Tok::Colon, "`:`")?;
        let e = self.expr()?;
        if !e.constant.is_zero() {
            let (line, col) = e.constant_at.unwrap_or(self.end);
            return Err(LpError::Syntax {
                line,
                col,
                message: "objective may not carry a nonzero constant".into(),
            });
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok((sense, e.terms))
    }

    fn constraint(&mut self) -> Result<RawConstraint, LpError> {
        let (line, col) = self.here();
        let e = self.expr()?;
        if let Some((line, col)) = e.constant_at {
            return Err(LpError::Syntax {
                line,
                col,
                message: "constants belong on the right-hand side".into(),
            });
        }
        let relation = match self.bump() {
            Some(Tok::Rel(r)) => r,
            other => {
                self.pos -= 1;
                let found = other.as_ref().map_or("end of input".to_string(), describe);
                return self.error(format!("expected a relation, found {found}"));
            }
        };
        let negative = match self.peek().map(|s| &s.tok) {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let rhs = match self.bump() {
            Some(Tok::Num(v)) => v,
            other => {
                self.pos -= 1;
                let found = other.as_ref().map_or("end of input".to_string(), describe);
                return self.error(format!("expected a right-hand side number, found {found}"));
            }
        };
        self.expect(Tok::Semi, "`;`")?;
        if e.terms.iter().all(|(_, v)| v.is_zero()) {
            return Err(LpError::EmptyConstraint { line, col });
        }
        Ok(RawConstraint {
            coeffs: e.terms,
            relation,
            rhs: if negative { -rhs } else { rhs },
            line,
        })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number `{v}`"),
        Tok::Ident(n) => format!("`{n}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Rel(_) => "relation".into(),
    }
}

pub fn parse_lp(text: &str) -> Result<ParsedLp, LpError> {
    let toks = lex(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        names: Vec::new(),
    };
    let (sense, objective) = p.objective()?;
    let mut constraints = Vec::new();
    while p.peek().is_some() {
        constraints.push(p.constraint()?);
    }
    Ok(ParsedLp {
        sense,
        objective,
        constraints,
        names: p.names,
    })
}

/// Brings a parsed problem to `max cᵀx, Ax ≤ b, x ≥ 0`: `min` objectives are
/// negated, `≥` rows negated, and `=` rows split into a `≤` and a negated `≥` row.
pub fn normalize(parsed: &ParsedLp) -> Result<LinearProgram<Rational>, LpError> {
    let p = parsed.names.len();
    let index = |name: &str| parsed.names.iter().position(|n| n == name).expect("name collected");
    let dense = |terms: &[(String, Rational)]| {
        let mut v = vec![Rational::zero(); p];
        for (n, c) in terms {
            v[index(n)] += c;
        }
        v
    };
    let mut c = dense(&parsed.objective);
    if parsed.sense == Sense::Min {
        c.iter_mut().for_each(|v| *v = -v.clone());
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for con in &parsed.constraints {
        let row = dense(&con.coeffs);
        let negated = || row.iter().map(|v| -v).collect::<Vec<_>>();
        match con.relation {
            Relation::Le => {
                a.push(row.clone());
                b.push(con.rhs.clone());
            }
            Relation::Ge => {
                a.push(negated());
                b.push(-&con.rhs);
            }
            Relation::Eq => {
                a.push(row.clone());
                b.push(con.rhs.clone());
                a.push(negated());
                b.push(-&con.rhs);
            }
        }
    }
    Ok(LinearProgram::new(c, a, b, parsed.names.clone())?)
}

/// Parses and normalizes in one go.
pub fn read_lp(text: &str) -> Result<LinearProgram<Rational>, LpError> {
    normalize(&parse_lp(text)?)
}

fn write_expr(out: &mut String, names: &[String], coeffs: &[Rational]) {
    if names.is_empty() {
        out.push('0');
        return;
    }
    for (k, (name, c)) in names.iter().zip(coeffs).enumerate() {
        let neg = c < &Rational::zero();
        let mag = if neg { -c } else { c.clone() };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let _ = write!(out, "{mag} {name}");
    }
}

/// Canonical text of a problem already in `max, ≤` form. Every variable is
/// written in every statement (zero coefficients included) so the name order
/// survives a re-parse.
pub fn render_lp(lp: &LinearProgram<Rational>) -> String {
    let mut out = String::from("max: ");
    write_expr(&mut out, lp.var_names(), lp.objective());
    out.push_str(";\n");
    for (row, rhs) in lp.matrix().iter().zip(lp.rhs()) {
        write_expr(&mut out, lp.var_names(), row);
        let _ = writeln!(out, " <= {rhs};");
    }
    out
}
