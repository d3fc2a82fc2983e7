//! Flat `key = value` problem files.
//!
//! ```text
//! # Example: φ(x) − ∫_{-1}^{1} (xt + x²t²) φ(t) dt = 1
//! interval_a = -1
//! interval_b = 1
//! coefficient = 1
//! lambda = -1
//! kernel = x*t + x^2*t^2
//! rhs = 1
//! exact = 1 + 10/9*x^2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `exact` is optional
//! and `coefficient` defaults to `1`; every other key is required. Each key
//! may appear at most once.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::expr::{self, Expr, Var};
use crate::galerkin::{Constant, FredholmProblem, ProblemError};

const KEYS: [&str; 7] = [
    "interval_a",
    "interval_b",
    "coefficient",
    "lambda",
    "kernel",
    "rhs",
    "exact",
];

#[derive(Debug, Error)]
pub enum ProblemFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { key: &'static str, line: usize },
    #[error("line {line}: invalid `{key}`: {message}")]
    ExpressionError {
        key: &'static str,
        line: usize,
        message: String,
    },
    #[error("bad interval: interval_a = {a} must be less than interval_b = {b}")]
    BadInterval { a: f64, b: f64 },
}

struct Entry<'a> {
    value: &'a str,
    line: usize,
}

/// Parses the text of a problem file.
pub fn parse_problem(text: &str) -> Result<FredholmProblem, ProblemFileError> {
    let mut entries: [Option<Entry>; KEYS.len()] = Default::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or(ProblemFileError::Malformed { line })?;
        let key = key.trim();
        let slot =
            KEYS.iter()
                .position(|k| *k == key)
                .ok_or_else(|| ProblemFileError::UnknownKey {
                    key: key.to_string(),
                    line,
                })?;
        if entries[slot].is_some() {
            return Err(ProblemFileError::DuplicateKey {
                key: KEYS[slot],
                line,
            });
        }
        entries[slot] = Some(Entry {
            value: value.trim(),
            line,
        });
    }

    let get = |key: &'static str| -> Option<&Entry> {
        let slot = KEYS.iter().position(|k| *k == key).expect("known key");
        entries[slot].as_ref()
    };
    let required = |key: &'static str| get(key).ok_or(ProblemFileError::MissingKey(key));

    let expression = |key: &'static str, entry: &Entry, allow_t: bool| {
        let invalid = |message: String| ProblemFileError::ExpressionError {
            key,
            line: entry.line,
            message,
        };
        let e = expr::parse(entry.value).map_err(|err| invalid(err.to_string()))?;
        if !allow_t && e.uses_var(Var::T) {
            return Err(invalid("must not depend on t".into()));
        }
        Ok(e)
    };
    let constant = |key: &'static str| -> Result<Constant, ProblemFileError> {
        let entry = required(key)?;
        let e = expression(key, entry, false)?;
        Constant::from_expr(e).ok_or_else(|| ProblemFileError::ExpressionError {
            key,
            line: entry.line,
            message: "must be a finite constant".into(),
        })
    };

    let lower = constant("interval_a")?;
    let upper = constant("interval_b")?;
    let lambda = constant("lambda")?;
    let kernel = expression("kernel", required("kernel")?, true)?;
    let rhs = expression("rhs", required("rhs")?, false)?;
    let coefficient = match get("coefficient") {
        Some(entry) => expression("coefficient", entry, false)?,
        None => Expr::number(1),
    };
    let exact = get("exact")
        .map(|entry| expression("exact", entry, false))
        .transpose()?;

    FredholmProblem::new(coefficient, lambda, kernel, rhs, lower, upper, exact).map_err(|e| match e
    {
        ProblemError::BadInterval { a, b } => ProblemFileError::BadInterval { a, b },
        // t-dependence and constness were checked per key above
        other => unreachable!("validated earlier: {other}"),
    })
}

/// Reads and parses a problem file.
pub fn load_problem(path: &Path) -> Result<FredholmProblem, ProblemFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ProblemFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_problem(&text)
}

/// Renders a problem in the file format; [`parse_problem`] reads it back to
/// an identical problem.
pub fn write_problem(problem: &FredholmProblem) -> String {
    let mut out = String::new();
    out.push_str("# coefficient(x)*phi(x) + lambda * integral(kernel(t, x)*phi(t), t = interval_a..interval_b) = rhs(x)\n");
    let _ = writeln!(out, "interval_a = {}", problem.lower().expr());
    let _ = writeln!(out, "interval_b = {}", problem.upper().expr());
    let _ = writeln!(out, "coefficient = {}", problem.coefficient());
    let _ = writeln!(out, "lambda = {}", problem.lambda().expr());
    let _ = writeln!(out, "kernel = {}", problem.kernel());
    let _ = writeln!(out, "rhs = {}", problem.rhs());
    if let Some(exact) = problem.exact() {
        let _ = writeln!(out, "exact = {exact}");
    }
    out
}
