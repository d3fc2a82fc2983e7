//! Expression language for the known functions of an integral equation.
//!
//! Expressions are real-valued formulas in the variables `x` and `t`:
//!
//! ```text
//! expr  := term (("+"|"-") term)*
//! term  := factor (("*"|"/") factor)*
//! factor:= "-" factor | power
//! power := atom ("^" factor)?
//! atom  := NUMBER | "x" | "t" | "pi" | "e" | NAME "(" expr ")" | "(" expr ")"
//! ```
//!
//! `NAME` is one of `exp`, `sin`, `cos`, `log`, `sqrt`. Multiplication is
//! always explicit: `x*t`, never `xt`.
//!
//! ```
//! use fredholm::expr::Expr;
//!
//! let kernel: Expr = "x*t + x^2*t^2".parse().unwrap();
//! assert_eq!(kernel.evaluate(1.0, Some(2.0)).unwrap(), 6.0);
//! assert!(kernel.to_polynomial().is_some());
//! ```

mod parser;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{BivarPoly, Rational, MAX_TOTAL_DEGREE};

pub use parser::{parse, MAX_DEPTH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error in `{node}`: {message}")]
    Domain { node: String, message: String },
    #[error("expression references `t` but no value was bound")]
    MissingBinding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConst {
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Parsed expression tree. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Numeric literal; `text` is the literal as written so that decimal
    /// literals can be recovered exactly as rationals.
    Number {
        text: String,
        value: f64,
    },
    Var(Var),
    Const(NamedConst),
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
    },
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Expr {
    pub fn number(value: u64) -> Self {
        Expr::Number {
            text: value.to_string(),
            value: value as f64,
        }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn uses_var(&self, var: Var) -> bool {
        match self {
            Expr::Var(v) => *v == var,
            Expr::Number { .. } | Expr::Const(_) => false,
            Expr::Neg(inner) => inner.uses_var(var),
            Expr::Binary { lhs, rhs, .. } => lhs.uses_var(var) || rhs.uses_var(var),
            Expr::Call { arg, .. } => arg.uses_var(var),
        }
    }

    /// Evaluates the expression at `x` and, when bound, `t`.
    pub fn evaluate(&self, x: f64, t: Option<f64>) -> Result<f64, ExprError> {
        match self {
            Expr::Number { value, .. } => Ok(*value),
            Expr::Var(Var::X) => Ok(x),
            Expr::Var(Var::T) => t.ok_or(ExprError::MissingBinding),
            Expr::Const(NamedConst::Pi) => Ok(std::f64::consts::PI),
            Expr::Const(NamedConst::E) => Ok(std::f64::consts::E),
            Expr::Neg(inner) => Ok(-inner.evaluate(x, t)?),
            Expr::Binary { op, lhs, rhs } => {
                let l = lhs.evaluate(x, t)?;
                let r = rhs.evaluate(x, t)?;
                match op {
                    BinOp::Add => Ok(l + r),
                    BinOp::Sub => Ok(l - r),
                    BinOp::Mul => Ok(l * r),
                    BinOp::Div => {
                        if r == 0.0 {
                            Err(self.domain_error("division by zero"))
                        } else {
                            Ok(l / r)
                        }
                    }
                    BinOp::Pow => {
                        let v = l.powf(r);
                        if v.is_nan() && !l.is_nan() && !r.is_nan() {
                            Err(self.domain_error(format!("{l} raised to {r} is not real")))
                        } else {
                            Ok(v)
                        }
                    }
                }
            }
            Expr::Call { func, arg } => {
                let v = arg.evaluate(x, t)?;
                match func {
                    Func::Exp => Ok(v.exp()),
                    Func::Sin => Ok(v.sin()),
                    Func::Cos => Ok(v.cos()),
                    Func::Log if v <= 0.0 => {
                        Err(self.domain_error(format!("log of nonpositive value {v}")))
                    }
                    Func::Log => Ok(v.ln()),
                    Func::Sqrt if v < 0.0 => {
                        Err(self.domain_error(format!("sqrt of negative value {v}")))
                    }
                    Func::Sqrt => Ok(v.sqrt()),
                }
            }
        }
    }

    fn domain_error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Domain {
            node: self.to_string(),
            message: message.into(),
        }
    }

    /// Expands the expression into a bivariate polynomial with rational
    /// coefficients, or returns `None` when it is not one.
    ///
    /// Accepted: numeric literals, `x`, `t`, `+ - *`, division by a nonzero
    /// constant, and powers with a nonnegative integer literal exponent.
    /// Named constants and function calls are never polynomial.
    pub fn to_polynomial(&self) -> Option<BivarPoly> {
        let poly = match self {
            Expr::Number { text, .. } => BivarPoly::constant(literal_to_rational(text)?),
            Expr::Var(Var::X) => BivarPoly::x(),
            Expr::Var(Var::T) => BivarPoly::t(),
            Expr::Const(_) | Expr::Call { .. } => return None,
            Expr::Neg(inner) => -&inner.to_polynomial()?,
            Expr::Binary { op, lhs, rhs } => {
                if *op == BinOp::Pow {
                    return power_polynomial(lhs, rhs);
                }
                let l = lhs.to_polynomial()?;
                let r = rhs.to_polynomial()?;
                match op {
                    BinOp::Add => &l + &r,
                    BinOp::Sub => &l - &r,
                    BinOp::Mul => {
                        if l.total_degree() + r.total_degree() > MAX_TOTAL_DEGREE {
                            return None;
                        }
                        &l * &r
                    }
                    BinOp::Div => {
                        let c = r.as_constant()?;
                        if c.is_zero() {
                            return None;
                        }
                        l.scale(&c.recip())
                    }
                    BinOp::Pow => unreachable!(),
                }
            }
        };
        Some(poly)
    }
}

/// Largest power applied to a constant during polynomial expansion, in bits
/// of the resulting numerator or denominator.
const MAX_CONSTANT_BITS: u64 = 1 << 16;

fn power_polynomial(base: &Expr, exponent: &Expr) -> Option<BivarPoly> {
    let Expr::Number { text, .. } = exponent else {
        return None;
    };
    let e = literal_to_rational(text)?;
    if !e.is_integer() || e.is_negative() {
        return None;
    }
    let e = e.to_integer().to_u32()?;
    let base = base.to_polynomial()?;
    match base.as_constant() {
        Some(c) => {
            let bits = c.numer().bits().max(c.denom().bits());
            if bits.saturating_mul(u64::from(e)) > MAX_CONSTANT_BITS {
                return None;
            }
        }
        None => {
            if base.total_degree().saturating_mul(e) > MAX_TOTAL_DEGREE {
                return None;
            }
        }
    }
    Some(base.pow(e))
}

/// Exact value of a numeric literal such as `12`, `0.25` or `1.5e-3`.
pub fn literal_to_rational(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let shift = exponent.checked_sub(frac_part.len() as i64)?;
    // literals like 1e100000 would build enormous integers
    if shift.unsigned_abs() > 4096 {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10u32), shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        Rational::from_integer(numer * scale)
    } else {
        Rational::new(numer, scale)
    })
}

/// Prints with full parenthesization; reparsing the output yields an
/// identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number { text, .. } => f.write_str(text),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Var(Var::T) => f.write_str("t"),
            Expr::Const(NamedConst::Pi) => f.write_str("pi"),
            Expr::Const(NamedConst::E) => f.write_str("e"),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// Renders a univariate polynomial `c[0] + c[1] x + ...` in the expression
/// syntax, skipping zero terms.
pub fn format_monomial<T: fmt::Display + Zero + One + PartialEq + Clone + Signed>(
    coeffs: &[T],
) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let magnitude = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let power = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        if k == 0 {
            out.push_str(&magnitude.to_string());
        } else if magnitude.is_one() {
            out.push_str(&power);
        } else {
            out.push_str(&format!("{magnitude}*{power}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
