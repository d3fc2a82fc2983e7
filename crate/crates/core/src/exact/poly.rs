use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// Degree cap for user-supplied polynomial data.
pub const MAX_TOTAL_DEGREE: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyVar {
    X,
    T,
}

/// Sparse polynomial in `x` and `t` with rational coefficients.
///
/// Keys are `(deg_x, deg_t)`. Zero coefficients are never stored, so two
/// polynomials are equal exactly when their maps are equal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, deg_x: u32, deg_t: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(deg_x, deg_t, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn var(v: PolyVar) -> Self {
        match v {
            PolyVar::X => Self::x(),
            PolyVar::T => Self::t(),
        }
    }

    /// Builds `Σ c_k v^k` from univariate coefficients.
    pub fn from_univariate(coeffs: &[Rational], v: PolyVar) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let k = k as u32;
            match v {
                PolyVar::X => p.add_term(k, 0, c.clone()),
                PolyVar::T => p.add_term(0, k, c.clone()),
            }
        }
        p
    }

    fn add_term(&mut self, deg_x: u32, deg_t: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((deg_x, deg_t))
            .or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(deg_x, deg_t));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, deg_x: u32, deg_t: u32) -> Rational {
        self.terms
            .get(&(deg_x, deg_t))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(dx, dt)| dx + dt).max().unwrap_or(0)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_t(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// The constant value, if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(Rational::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Definite integral over `t` in `[a, b]`; the result depends on `x` only.
    pub fn integrate_t(&self, a: &Rational, b: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(dx, dt), c) in &self.terms {
            out.add_term(dx, 0, c * power_difference(a, b, dt));
        }
        out
    }

    /// Definite integral over `x` in `[a, b]`; the result depends on `t` only.
    pub fn integrate_x(&self, a: &Rational, b: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(dx, dt), c) in &self.terms {
            out.add_term(0, dt, c * power_difference(a, b, dx));
        }
        out
    }

    pub fn evaluate(&self, x: &Rational, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(dx, dt), c)| c * rational_pow(x, dx) * rational_pow(t, dt))
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn evaluate_f64(&self, x: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(dx, dt), c)| to_f64(c) * x.powi(dx as i32) * t.powi(dt as i32))
            .sum()
    }

    /// Coefficients `c_0..c_d` of a polynomial in `x` alone.
    ///
    /// Returns `None` if any term involves `t`.
    pub fn univariate_x(&self) -> Option<Vec<Rational>> {
        if self.degree_t() > 0 {
            return None;
        }
        let mut out = vec![Rational::zero(); self.degree_x() as usize + 1];
        for (&(dx, _), c) in &self.terms {
            out[dx as usize] = c.clone();
        }
        Some(out)
    }

    /// Replaces `x` by `t`. Only valid for polynomials in `x` alone.
    pub fn x_to_t(&self) -> Option<Self> {
        if self.degree_t() > 0 {
            return None;
        }
        Some(Self {
            terms: self
                .terms
                .iter()
                .map(|(&(dx, _), c)| ((0, dx), c.clone()))
                .collect(),
        })
    }
}

/// `(b^(d+1) - a^(d+1)) / (d+1)`, the integral of `s^d` over `[a, b]`.
fn power_difference(a: &Rational, b: &Rational, d: u32) -> Rational {
    (rational_pow(b, d + 1) - rational_pow(a, d + 1)) / Rational::from_integer(BigInt::from(d + 1))
}

pub(crate) fn rational_pow(v: &Rational, e: u32) -> Rational {
    num_traits::pow(v.clone(), e as usize)
}

/// Nearest `f64` to a rational. Exact for values representable in `f64`.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for &BivarPoly {
    type Output = BivarPoly;

    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(dx, dt), c) in &rhs.terms {
            out.add_term(dx, dt, c.clone());
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;

    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(dx, dt), c) in &rhs.terms {
            out.add_term(dx, dt, -c.clone());
        }
        out
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;

    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(ax, at), ac) in &self.terms {
            for (&(bx, bt), bc) in &rhs.terms {
                out.add_term(ax + bx, at + bt, ac * bc);
            }
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;

    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(dx, dt), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            match dx {
                0 => {}
                1 => f.write_str("*x")?,
                _ => write!(f, "*x^{dx}")?,
            }
            match dt {
                0 => {}
                1 => f.write_str("*t")?,
                _ => write!(f, "*t^{dt}")?,
            }
        }
        Ok(())
    }
}
