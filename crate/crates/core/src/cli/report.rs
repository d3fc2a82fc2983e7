//! CSV and text rendering for the command-line tool.

use std::fmt::Write as _;

use crate::basis::{self, BasisError, BasisSpec};
use crate::galerkin::{ConvergenceRow, ErrorRow};

/// Significant digits used for table values.
pub const TABLE_DIGITS: usize = 10;

/// Formats `v` with `digits` significant digits: fixed notation for
/// moderate magnitudes, scientific otherwise.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    // round first so that e.g. 9.9999999999 is classified by its rounded exponent
    let sci = format!("{:.*e}", digits - 1, v);
    let exponent: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("exponent");
    if (-5..(digits as i32)).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

fn sig(v: f64) -> String {
    format_sig(v, TABLE_DIGITS)
}

pub fn error_table_csv(rows: &[ErrorRow]) -> String {
    let mut out = String::from("x,exact,approx,E,E_kind\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sig(r.x),
            sig(r.exact),
            sig(r.approx),
            sig(r.error),
            r.kind.label()
        );
    }
    out
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("degree,max_E,condition\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            r.degree,
            sig(r.max_error),
            sig(r.condition)
        );
    }
    out
}

/// Basis values at `samples` equispaced points of the interval, with header
/// `x,B0,...,Bn`. Values are written with round-trip precision.
pub fn basis_samples_csv(spec: &BasisSpec, samples: usize) -> Result<String, BasisError> {
    let (a, b) = spec.interval();
    let mut out = String::from("x");
    for i in 0..spec.len() {
        let _ = write!(out, ",B{i}");
    }
    out.push('\n');
    let last = samples.max(2) - 1;
    for k in 0..=last {
        let x = if k == last {
            b
        } else {
            a + (b - a) * k as f64 / last as f64
        };
        let row = basis::basis_row(spec, x)?;
        let _ = write!(out, "{x}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    Ok(out)
}
