//! Exact Galerkin assembly and solve over the rationals.
//!
//! When `a(x)`, `k(t, x)` and `f(x)` are polynomials with rational
//! coefficients and the interval endpoints are rational, every entry of the
//! Galerkin system is a rational number that can be computed by termwise
//! monomial integration. Solving that system by fraction-exact elimination
//! yields the trial coefficients as exact fractions.

mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::galerkin::FredholmProblem;

pub use poly::{to_f64, BivarPoly, PolyVar, MAX_TOTAL_DEGREE};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Largest basis degree accepted by the exact path.
pub const MAX_EXACT_DEGREE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("basis index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("degree {0} exceeds the exact-path limit of {MAX_EXACT_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("system is singular: no nonzero pivot in column {column}")]
    SingularSystem { column: usize },
    #[error("`{0}` is not a polynomial with rational coefficients")]
    NotPolynomial(&'static str),
    #[error("`{0}` must not depend on t")]
    DependsOnT(&'static str),
    #[error("interval [{a}, {b}] is empty or reversed")]
    BadInterval { a: Box<Rational>, b: Box<Rational> },
    #[error("polynomial `{0}` exceeds total degree {MAX_TOTAL_DEGREE}")]
    DegreeCap(&'static str),
}

/// Integral equation `a(x) φ(x) + λ ∫ k(t,x) φ(t) dt = f(x)` with polynomial
/// data and rational bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactProblem {
    coefficient: BivarPoly,
    lambda: Rational,
    kernel: BivarPoly,
    rhs: BivarPoly,
    a: Rational,
    b: Rational,
}

impl ExactProblem {
    pub fn new(
        coefficient: BivarPoly,
        lambda: Rational,
        kernel: BivarPoly,
        rhs: BivarPoly,
        a: Rational,
        b: Rational,
    ) -> Result<Self, ExactError> {
        if b <= a {
            return Err(ExactError::BadInterval {
                a: Box::new(a),
                b: Box::new(b),
            });
        }
        if coefficient.degree_t() > 0 {
            return Err(ExactError::DependsOnT("coefficient"));
        }
        if rhs.degree_t() > 0 {
            return Err(ExactError::DependsOnT("rhs"));
        }
        for (name, p) in [
            ("coefficient", &coefficient),
            ("kernel", &kernel),
            ("rhs", &rhs),
        ] {
            if p.total_degree() > MAX_TOTAL_DEGREE {
                return Err(ExactError::DegreeCap(name));
            }
        }
        Ok(Self {
            coefficient,
            lambda,
            kernel,
            rhs,
            a,
            b,
        })
    }

    /// Converts a parsed problem when all of its data are rational
    /// polynomials and its bounds are rational constants.
    pub fn from_problem(problem: &FredholmProblem) -> Result<Self, ExactError> {
        let poly =
            |e: &crate::expr::Expr, name| e.to_polynomial().ok_or(ExactError::NotPolynomial(name));
        let constant = |e: &crate::expr::Expr, name| {
            e.to_polynomial()
                .and_then(|p| p.as_constant())
                .ok_or(ExactError::NotPolynomial(name))
        };
        Self::new(
            poly(problem.coefficient(), "coefficient")?,
            constant(problem.lambda().expr(), "lambda")?,
            poly(problem.kernel(), "kernel")?,
            poly(problem.rhs(), "rhs")?,
            constant(problem.lower().expr(), "interval_a")?,
            constant(problem.upper().expr(), "interval_b")?,
        )
    }

    pub fn coefficient(&self) -> &BivarPoly {
        &self.coefficient
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn kernel(&self) -> &BivarPoly {
        &self.kernel
    }

    pub fn rhs(&self) -> &BivarPoly {
        &self.rhs
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.a, &self.b)
    }

    /// `a(x) φ(x) + λ ∫ k(t,x) φ(t) dt − f(x)` for a trial function `φ`
    /// given as a polynomial in `x`. Zero exactly when `φ` solves the
    /// equation.
    pub fn residual(&self, phi: &BivarPoly) -> Option<BivarPoly> {
        let phi_t = phi.x_to_t()?;
        let integral = (&self.kernel * &phi_t).integrate_t(&self.a, &self.b);
        let lhs = &(&self.coefficient * phi) + &integral.scale(&self.lambda);
        Some(&lhs - &self.rhs)
    }
}

/// Monomial expansion of `B_{i,n}(v) = C(n,i) (v−a)^i (b−v)^(n−i) / (b−a)^n`.
pub fn bernstein_poly_exact(
    i: usize,
    n: usize,
    a: &Rational,
    b: &Rational,
    var: PolyVar,
) -> Result<BivarPoly, ExactError> {
    if i > n {
        return Err(ExactError::IndexOutOfRange {
            index: i,
            degree: n,
        });
    }
    let v = BivarPoly::var(var);
    let left = &v - &BivarPoly::constant(a.clone());
    let right = &BivarPoly::constant(b.clone()) - &v;
    let binom = Rational::from_integer(binomial(n, i));
    let scale = binom / poly::rational_pow(&(b - a), n as u32);
    Ok((&left.pow(i as u32) * &right.pow((n - i) as u32)).scale(&scale))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Exact Galerkin system. `matrix[j][i]` holds `C_{i,j}`, the coefficient
/// of trial function `i` in test equation `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSystem {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

/// Assembles `C_{i,j} = ∫ a B_i B_j dx + λ ∫ (∫ k B_i dt) B_j dx` and
/// `F_j = ∫ B_j f dx` exactly.
pub fn exact_assemble(problem: &ExactProblem, n: usize) -> Result<ExactSystem, ExactError> {
    if n > MAX_EXACT_DEGREE {
        return Err(ExactError::DegreeTooLarge(n));
    }
    let (a, b) = (&problem.a, &problem.b);
    let basis_x: Vec<BivarPoly> = (0..=n)
        .map(|i| bernstein_poly_exact(i, n, a, b, PolyVar::X))
        .collect::<Result<_, _>>()?;

    let definite_x = |p: &BivarPoly| p.integrate_x(a, b).coeff(0, 0);

    // trial function i applied through the operator, as a polynomial in x
    let applied: Vec<BivarPoly> = basis_x
        .iter()
        .map(|bx| {
            let bt = bx.x_to_t().expect("basis is univariate in x");
            let inner = (&problem.kernel * &bt).integrate_t(a, b);
            &(&problem.coefficient * bx) + &inner.scale(&problem.lambda)
        })
        .collect();

    let matrix = basis_x
        .iter()
        .map(|bj| applied.iter().map(|gi| definite_x(&(gi * bj))).collect())
        .collect();
    let rhs = basis_x
        .iter()
        .map(|bj| definite_x(&(bj * &problem.rhs)))
        .collect();
    Ok(ExactSystem { matrix, rhs })
}

/// Gaussian elimination over the rationals, pivoting on the first nonzero
/// entry of each column.
pub fn solve_rational_system(
    mut matrix: Vec<Vec<Rational>>,
    mut rhs: Vec<Rational>,
) -> Result<Vec<Rational>, ExactError> {
    let m = rhs.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !matrix[r][col].is_zero())
            .ok_or(ExactError::SingularSystem { column: col })?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let (upper, lower) = matrix.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for (offset, row) in lower.iter_mut().enumerate() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for k in col..m {
                let delta = &factor * &pivot_row[k];
                row[k] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[col + 1 + offset] -= delta;
        }
    }
    let mut x = vec![Rational::zero(); m];
    for row in (0..m).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..m {
            acc -= &matrix[row][k] * &x[k];
        }
        x[row] = acc / &matrix[row][row];
    }
    Ok(x)
}

/// Exact trial coefficients `a_0..a_n`.
pub fn exact_solve(problem: &ExactProblem, n: usize) -> Result<Vec<Rational>, ExactError> {
    let system = exact_assemble(problem, n)?;
    solve_rational_system(system.matrix, system.rhs)
}
