//! Bernstein polynomials over an arbitrary interval `[a, b]`:
//!
//! ```text
//! B_{i,n}(x) = C(n,i) (x−a)^i (b−x)^(n−i) / (b−a)^n,   i = 0..=n
//! ```
//!
//! They are nonnegative on `[a, b]`, sum to one, and interpolate the
//! endpoints: only `B_{0,n}` is nonzero at `a` and only `B_{n,n}` at `b`.

use std::ops::{Add, Div, Mul, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

/// Highest supported basis degree. Bernstein Gram matrices are badly
/// conditioned well before this.
pub const MAX_DEGREE: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("degree {0} exceeds the maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("basis index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("x = {x} lies outside [{a}, {b}]")]
    OutOfInterval { x: f64, a: f64, b: f64 },
}

/// Degree and interval of a Bernstein basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    degree: usize,
    a: f64,
    b: f64,
}

impl BasisSpec {
    pub fn new(degree: usize, a: f64, b: f64) -> Result<Self, BasisError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(BasisError::InvalidInterval { a, b });
        }
        if degree > MAX_DEGREE {
            return Err(BasisError::DegreeTooLarge(degree));
        }
        Ok(Self { degree, a, b })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis functions, `n + 1`.
    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Maps `x` to `u = (x−a)/(b−a)` in `[0, 1]`.
    ///
    /// Points within a few ulps of the interval (as produced by an
    /// equispaced grid) are clamped; anything further out is rejected.
    fn normalize(&self, x: f64) -> Result<f64, BasisError> {
        let slack = 1e-12 * (self.b - self.a);
        if !(x >= self.a - slack && x <= self.b + slack) {
            return Err(BasisError::OutOfInterval {
                x,
                a: self.a,
                b: self.b,
            });
        }
        Ok(((x - self.a) / (self.b - self.a)).clamp(0.0, 1.0))
    }
}

/// Value of `B_{i,n}(x)`, zero for `i < 0` or `i > n`.
pub fn bernstein_value(i: i64, spec: &BasisSpec, x: f64) -> Result<f64, BasisError> {
    let u = spec.normalize(x)?;
    let n = spec.degree;
    if i < 0 || i as usize > n {
        return Ok(0.0);
    }
    let i = i as usize;
    Ok(binomial_f64(n, i) * u.powi(i as i32) * (1.0 - u).powi((n - i) as i32))
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// All `n + 1` basis values at `x`, by the de Casteljau-style recurrence
/// `B_{j,k} = (1−u) B_{j,k−1} + u B_{j−1,k−1}`.
pub fn basis_row(spec: &BasisSpec, x: f64) -> Result<Vec<f64>, BasisError> {
    let u = spec.normalize(x)?;
    let mut row = vec![0.0; spec.len()];
    fill_row(u, &mut row);
    Ok(row)
}

/// Writes the degree `row.len() - 1` basis at normalized position `u`.
pub(crate) fn fill_row(u: f64, row: &mut [f64]) {
    let v = 1.0 - u;
    row.fill(0.0);
    row[0] = 1.0;
    for k in 1..row.len() {
        let mut prev = 0.0;
        for value in row.iter_mut().take(k + 1) {
            let current = *value;
            *value = v * current + u * prev;
            prev = current;
        }
    }
}

/// `∫_a^b B_{i,n}(x) dx`, which is `(b−a)/(n+1)` for every `i`.
pub fn basis_integral(i: usize, spec: &BasisSpec) -> Result<f64, BasisError> {
    if i > spec.degree {
        return Err(BasisError::IndexOutOfRange {
            index: i,
            degree: spec.degree,
        });
    }
    Ok((spec.b - spec.a) / (spec.degree + 1) as f64)
}

/// Converts Bernstein coefficients on `[a, b]` to monomial coefficients
/// `c_0..c_n` with `Σ coeffs_i B_{i,n}(x) = Σ c_k x^k`.
///
/// Generic over the scalar so the same routine runs exactly on rationals
/// and approximately on `f64`.
pub fn bernstein_to_monomial<T>(coeffs: &[T], a: &T, b: &T) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let n = match coeffs.len() {
        0 => return Vec::new(),
        len => len - 1,
    };

    // power-basis coefficients in u: p_k = C(n,k) Δ^k coeffs_0
    let mut diffs = coeffs.to_vec();
    let mut in_u = Vec::with_capacity(n + 1);
    let mut binom = vec![T::one()];
    for k in 0..=n {
        in_u.push(binom[k].clone() * diffs[0].clone());
        for j in 0..n - k {
            diffs[j] = diffs[j + 1].clone() - diffs[j].clone();
        }
        binom = pascal_next(&binom, n);
    }

    // substitute u = (x − a)/h by Horner's rule on polynomials
    let h = b.clone() - a.clone();
    let mut out = vec![T::zero(); n + 1];
    out[0] = in_u[n].clone();
    for (deg, pk) in in_u.iter().rev().skip(1).enumerate() {
        // out ← out·(x − a)/h + pk, where out currently has degree `deg`
        for j in (0..=deg + 1).rev() {
            let shifted = if j > 0 { out[j - 1].clone() } else { T::zero() };
            let kept = if j <= deg { out[j].clone() } else { T::zero() };
            out[j] = (shifted - a.clone() * kept) / h.clone();
        }
        out[0] = out[0].clone() + pk.clone();
    }
    out
}

/// Extends the prefix `C(n, 0..=k)` by `C(n, k+1)`. Integers are built from
/// `T::one()` so no conversion from primitive types is needed.
fn pascal_next<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Div<Output = T>>(
    row: &[T],
    n: usize,
) -> Vec<T> {
    // C(n, k+1) = C(n, k) · (n − k) / (k + 1)
    let k = row.len() - 1;
    let mut next = row.to_vec();
    if k < n {
        let count = |m: usize| (0..m).fold(T::zero(), |acc, _| acc + T::one());
        next.push(row[k].clone() * count(n - k) / count(k + 1));
    }
    next
}

/// Evaluates `Σ c_k x^k` by Horner's rule.
pub fn eval_monomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn spec(n: usize, a: f64, b: f64) -> BasisSpec {
        BasisSpec::new(n, a, b).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            BasisSpec::new(3, 1.0, 1.0),
            Err(BasisError::InvalidInterval { .. })
        ));
        assert!(matches!(
            BasisSpec::new(3, 2.0, 1.0),
            Err(BasisError::InvalidInterval { .. })
        ));
        assert!(matches!(
            BasisSpec::new(3, 0.0, f64::NAN),
            Err(BasisError::InvalidInterval { .. })
        ));
        assert_eq!(
            BasisSpec::new(51, 0.0, 1.0),
            Err(BasisError::DegreeTooLarge(51))
        );
        assert!(BasisSpec::new(50, 0.0, 1.0).is_ok());
    }

    #[test]
    fn values() {
        let s = spec(10, 0.0, 1.0);
        assert_eq!(bernstein_value(0, &s, 0.5).unwrap(), 0.0009765625);
        let s5 = spec(5, -2.0, 3.0);
        assert_eq!(bernstein_value(2, &s5, -2.0).unwrap(), 0.0);
        assert_eq!(bernstein_value(2, &s5, 3.0).unwrap(), 0.0);
        assert_eq!(bernstein_value(-1, &s5, 0.3).unwrap(), 0.0);
        assert_eq!(bernstein_value(6, &s5, 0.3).unwrap(), 0.0);
        assert!(matches!(
            bernstein_value(0, &s5, 3.5),
            Err(BasisError::OutOfInterval { .. })
        ));
    }

    #[test]
    fn degree_ten_list() {
        // B_{5,10} = 252 (b−x)^5 (x−a)^5 / (b−a)^10 on [a,b] = [-1, 3]
        let s = spec(10, -1.0, 3.0);
        let x = 0.7_f64;
        let direct = 252.0 * (3.0 - x).powi(5) * (x + 1.0).powi(5) / 4f64.powi(10);
        assert!((bernstein_value(5, &s, x).unwrap() - direct).abs() < 1e-15);
        assert!((basis_row(&s, x).unwrap()[5] - direct).abs() < 1e-15);
    }

    #[test]
    fn rows() {
        assert_eq!(
            basis_row(&spec(1, 0.0, 1.0), 0.25).unwrap(),
            vec![0.75, 0.25]
        );
        assert_eq!(
            basis_row(&spec(3, -1.0, 1.0), -1.0).unwrap(),
            vec![1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            basis_row(&spec(3, -1.0, 1.0), 1.0).unwrap(),
            vec![0.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(basis_row(&spec(0, 0.0, 1.0), 0.4).unwrap(), vec![1.0]);
    }

    #[test]
    fn row_matches_closed_form() {
        for n in 0..=20 {
            let s = spec(n, -0.5, 2.0);
            for k in 0..=16 {
                let x = -0.5 + 2.5 * k as f64 / 16.0;
                let row = basis_row(&s, x).unwrap();
                for (i, v) in row.iter().enumerate() {
                    let closed = bernstein_value(i as i64, &s, x).unwrap();
                    assert!((v - closed).abs() <= 1e-13, "n={n} i={i} x={x}");
                }
            }
        }
    }

    #[test]
    fn integrals() {
        let s = spec(3, -1.0, 1.0);
        for i in 0..=3 {
            assert_eq!(basis_integral(i, &s).unwrap(), 0.5);
        }
        assert_eq!(basis_integral(0, &spec(0, 0.0, 1.0)).unwrap(), 1.0);
        assert_eq!(basis_integral(4, &spec(10, 0.0, 1.0)).unwrap(), 1.0 / 11.0);
        assert!(matches!(
            basis_integral(4, &s),
            Err(BasisError::IndexOutOfRange {
                index: 4,
                degree: 3
            })
        ));
    }

    #[test]
    fn monomial_conversion_exact() {
        let (a, b) = (r(-1, 1), r(1, 1));
        let first = [r(19, 9), r(17, 27), r(17, 27), r(19, 9)];
        assert_eq!(
            bernstein_to_monomial(&first, &a, &b),
            vec![r(1, 1), r(0, 1), r(10, 9), r(0, 1)]
        );
        let second = [r(-1, 1), r(-1, 3), r(1, 3), r(1, 1)];
        assert_eq!(
            bernstein_to_monomial(&second, &a, &b),
            vec![r(0, 1), r(1, 1), r(0, 1), r(0, 1)]
        );
        let constant = vec![r(5, 7); 6];
        let mut expected = vec![r(0, 1); 6];
        expected[0] = r(5, 7);
        assert_eq!(
            bernstein_to_monomial(&constant, &r(2, 1), &r(9, 2)),
            expected
        );
        assert!(bernstein_to_monomial::<Rational>(&[], &a, &b).is_empty());
    }

    #[test]
    fn monomial_conversion_float() {
        let c = bernstein_to_monomial(&[2.0, 2.0, 2.0], &0.0, &1.0);
        assert_eq!(c, vec![2.0, 0.0, 0.0]);
        // B_{1,2} on [0,1] = 2x − 2x²
        let c = bernstein_to_monomial(&[0.0, 1.0, 0.0], &0.0, &1.0);
        assert_eq!(c, vec![0.0, 2.0, -2.0]);
    }
}
