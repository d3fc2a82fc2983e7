//! Galerkin pipeline for
//!
//! ```text
//! a(x) φ(x) + λ ∫_a^b k(t, x) φ(t) dt = f(x)
//! ```
//!
//! with trial function `φ̃(x) = Σ a_i B_{i,n}(x)`. Forcing the residual to be
//! orthogonal to every `B_{j,n}` gives the linear system `Σ_i a_i C_{i,j} = F_j`
//! where
//!
//! ```text
//! C_{i,j} = ∫ [a(x) B_i(x) + λ ∫ k(t,x) B_i(t) dt] B_j(x) dx
//! F_j     = ∫ B_j(x) f(x) dx
//! ```
//!
//! The floating point path evaluates these by Gauss–Legendre quadrature; the
//! exact path (see [`crate::exact`]) is used instead whenever the data allow.

use log::warn;
use thiserror::Error;

use crate::basis::{self, BasisError, BasisSpec};
use crate::exact::{self, ExactError, ExactProblem, Rational};
use crate::expr::{Expr, ExprError, Var};
use crate::linalg::{self, DenseMatrix, LinalgError};
use crate::quadrature::{self, QuadratureError};

/// Condition numbers above this trigger a warning.
pub const ILL_CONDITIONED: f64 = 1e12;

/// Below this magnitude the exact solution counts as zero and the error is
/// reported as an absolute difference.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// Points in the grid used by [`convergence_study`].
pub const CONVERGENCE_GRID_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("`{0}` must be a finite constant")]
    NotConstant(&'static str),
    #[error("`{0}` must not depend on t")]
    DependsOnT(&'static str),
    #[error("interval [{a}, {b}] is empty or reversed")]
    BadInterval { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("evaluating {which}: {source}")]
    Expression {
        which: &'static str,
        source: ExprError,
    },
    #[error("Galerkin system is singular (column {column})")]
    SingularSystem { column: usize },
    #[error(transparent)]
    Linalg(LinalgError),
    #[error("exact path unavailable: {0}")]
    ExactPathUnavailable(ExactError),
    #[error(transparent)]
    Exact(ExactError),
    #[error("x = {x} lies outside [{a}, {b}]")]
    OutOfInterval { x: f64, a: f64, b: f64 },
    #[error("problem has no exact solution to compare against")]
    MissingExactSolution,
    #[error("grid step {0} must be positive and finite")]
    BadGridStep(f64),
}

impl From<LinalgError> for SolveError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::SingularMatrix { column, .. } => SolveError::SingularSystem { column },
            other => SolveError::Linalg(other),
        }
    }
}

impl From<ExactError> for SolveError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::SingularSystem { column } => SolveError::SingularSystem { column },
            other => SolveError::Exact(other),
        }
    }
}

fn expr_err(which: &'static str) -> impl Fn(ExprError) -> SolveError {
    move |source| SolveError::Expression { which, source }
}

/// A constant written as an expression, e.g. `-1`, `1/3` or `pi/2`.
///
/// The expression is kept so that rational constants stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Constant {
    expr: Expr,
    value: f64,
}

impl Constant {
    /// Returns `None` if `expr` involves `x` or `t` or does not evaluate to
    /// a finite number.
    pub fn from_expr(expr: Expr) -> Option<Self> {
        if expr.uses_var(Var::X) || expr.uses_var(Var::T) {
            return None;
        }
        let value = expr.evaluate(0.0, None).ok().filter(|v| v.is_finite())?;
        Some(Self { expr, value })
    }

    pub fn integer(v: i64) -> Self {
        let magnitude = Expr::number(v.unsigned_abs());
        let expr = if v < 0 {
            Expr::Neg(Box::new(magnitude))
        } else {
            magnitude
        };
        Self {
            expr,
            value: v as f64,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }
}

/// `a(x) φ(x) + λ ∫_a^b k(t,x) φ(t) dt = f(x)` with optional known solution.
#[derive(Debug, Clone, PartialEq)]
pub struct FredholmProblem {
    coefficient: Expr,
    lambda: Constant,
    kernel: Expr,
    rhs: Expr,
    lower: Constant,
    upper: Constant,
    exact: Option<Expr>,
}

impl FredholmProblem {
    pub fn new(
        coefficient: Expr,
        lambda: Constant,
        kernel: Expr,
        rhs: Expr,
        lower: Constant,
        upper: Constant,
        exact: Option<Expr>,
    ) -> Result<Self, ProblemError> {
        if lower.value.partial_cmp(&upper.value) != Some(std::cmp::Ordering::Less) {
            return Err(ProblemError::BadInterval {
                a: lower.value,
                b: upper.value,
            });
        }
        if coefficient.uses_var(Var::T) {
            return Err(ProblemError::DependsOnT("coefficient"));
        }
        if rhs.uses_var(Var::T) {
            return Err(ProblemError::DependsOnT("rhs"));
        }
        if exact.as_ref().is_some_and(|e| e.uses_var(Var::T)) {
            return Err(ProblemError::DependsOnT("exact"));
        }
        Ok(Self {
            coefficient,
            lambda,
            kernel,
            rhs,
            lower,
            upper,
            exact,
        })
    }

    pub fn coefficient(&self) -> &Expr {
        &self.coefficient
    }

    pub fn lambda(&self) -> &Constant {
        &self.lambda
    }

    pub fn kernel(&self) -> &Expr {
        &self.kernel
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    pub fn lower(&self) -> &Constant {
        &self.lower
    }

    pub fn upper(&self) -> &Constant {
        &self.upper
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lower.value, self.upper.value)
    }

    pub fn exact(&self) -> Option<&Expr> {
        self.exact.as_ref()
    }
}

/// Quadrature-assembled Galerkin system. `matrix[(j, i)]` holds `C_{i,j}`,
/// so that `matrix · a = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub basis: BasisSpec,
    pub quadrature_order: usize,
}

/// `max(32, 2n + 4)`: exact for the polynomial integrands of low-degree
/// problems and converged to machine precision for smooth kernels.
pub fn default_quadrature_order(n: usize) -> usize {
    32.max(2 * n + 4)
}

/// Builds the Galerkin system by `q`-point Gauss–Legendre quadrature.
///
/// The inner `t` integral is evaluated at every outer node, so the kernel is
/// sampled on the full `q × q` tensor grid.
pub fn assemble(
    problem: &FredholmProblem,
    n: usize,
    q: usize,
) -> Result<GalerkinSystem, SolveError> {
    let (a, b) = problem.interval();
    let spec = BasisSpec::new(n, a, b)?;
    let rule = quadrature::gauss_legendre(q)?;
    let (points, weights) = rule.mapped(a, b);
    let lambda = problem.lambda.value;
    let size = spec.len();

    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|&x| basis::basis_row(&spec, x))
        .collect::<Result<_, _>>()?;
    let coeff: Vec<f64> = points
        .iter()
        .map(|&x| problem.coefficient.evaluate(x, None))
        .collect::<Result<_, _>>()
        .map_err(expr_err("coefficient"))?;
    let rhs_values: Vec<f64> = points
        .iter()
        .map(|&x| problem.rhs.evaluate(x, None))
        .collect::<Result<_, _>>()
        .map_err(expr_err("rhs"))?;

    // (a(x_k) B_i(x_k) + λ ∫ k(t, x_k) B_i(t) dt) at every outer node
    let mut applied = vec![vec![0.0; size]; q];
    for (k, &x) in points.iter().enumerate() {
        let mut inner = vec![0.0; size];
        for (l, &t) in points.iter().enumerate() {
            let kv = problem
                .kernel
                .evaluate(x, Some(t))
                .map_err(expr_err("kernel"))?;
            let wk = weights[l] * kv;
            for (acc, bi) in inner.iter_mut().zip(&rows[l]) {
                *acc += wk * bi;
            }
        }
        for i in 0..size {
            applied[k][i] = coeff[k] * rows[k][i] + lambda * inner[i];
        }
    }

    let mut matrix = DenseMatrix::zeros(size, size);
    let mut rhs = vec![0.0; size];
    for j in 0..size {
        for i in 0..size {
            matrix[(j, i)] = (0..q)
                .map(|k| weights[k] * applied[k][i] * rows[k][j])
                .sum();
        }
        rhs[j] = (0..q)
            .map(|k| weights[k] * rows[k][j] * rhs_values[k])
            .sum();
    }
    Ok(GalerkinSystem {
        matrix,
        rhs,
        basis: spec,
        quadrature_order: q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// Exact when the problem allows it, floating point otherwise.
    #[default]
    Auto,
    Float,
    Exact,
}

/// Which path produced a [`Solution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionMode {
    Float,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Float(Vec<f64>),
    /// Exact coefficients together with the rational interval they refer to.
    Exact {
        values: Vec<Rational>,
        a: Rational,
        b: Rational,
    },
}

/// Trial coefficients `a_0..a_n` with the information needed to evaluate
/// and judge them.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    basis: BasisSpec,
    coefficients: Coefficients,
    quadrature_order: Option<usize>,
    condition: f64,
}

impl Solution {
    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn mode(&self) -> SolutionMode {
        match self.coefficients {
            Coefficients::Float(_) => SolutionMode::Float,
            Coefficients::Exact { .. } => SolutionMode::Exact,
        }
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn coefficients_f64(&self) -> Vec<f64> {
        match &self.coefficients {
            Coefficients::Float(v) => v.clone(),
            Coefficients::Exact { values, .. } => values.iter().map(exact::to_f64).collect(),
        }
    }

    pub fn exact_coefficients(&self) -> Option<&[Rational]> {
        match &self.coefficients {
            Coefficients::Exact { values, .. } => Some(values),
            Coefficients::Float(_) => None,
        }
    }

    /// Quadrature order used for assembly; `None` for exact solutions.
    pub fn quadrature_order(&self) -> Option<usize> {
        self.quadrature_order
    }

    /// 1-norm condition number of the system matrix; infinite if the
    /// floating point matrix could not be factored.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.condition > ILL_CONDITIONED
    }

    /// Monomial coefficients `c_0..c_n` of `φ̃`.
    pub fn monomial_f64(&self) -> Vec<f64> {
        match self.monomial_exact() {
            Some(exact) => exact.iter().map(exact::to_f64).collect(),
            None => {
                let (a, b) = self.basis.interval();
                basis::bernstein_to_monomial(&self.coefficients_f64(), &a, &b)
            }
        }
    }

    /// Exact monomial coefficients, for exact solutions only.
    pub fn monomial_exact(&self) -> Option<Vec<Rational>> {
        match &self.coefficients {
            Coefficients::Exact { values, a, b } => {
                Some(basis::bernstein_to_monomial(values, a, b))
            }
            Coefficients::Float(_) => None,
        }
    }
}

fn condition_or_inf(matrix: &DenseMatrix) -> f64 {
    linalg::condition_1norm(matrix).unwrap_or(f64::INFINITY)
}

fn warn_if_ill_conditioned(condition: f64, n: usize) {
    if condition > ILL_CONDITIONED {
        warn!("Galerkin system for degree {n} is ill-conditioned (cond_1 = {condition:.3e})");
    }
}

/// Solves for the Bernstein coefficients of `φ̃` at degree `n`.
///
/// `q` defaults to [`default_quadrature_order`]; it is ignored by the exact
/// path.
pub fn solve(
    problem: &FredholmProblem,
    n: usize,
    mode: SolveMode,
    q: Option<usize>,
) -> Result<Solution, SolveError> {
    let (a, b) = problem.interval();
    let spec = BasisSpec::new(n, a, b)?;
    let exact_problem = match mode {
        SolveMode::Float => None,
        SolveMode::Exact => {
            if n > exact::MAX_EXACT_DEGREE {
                return Err(SolveError::Exact(ExactError::DegreeTooLarge(n)));
            }
            Some(ExactProblem::from_problem(problem).map_err(SolveError::ExactPathUnavailable)?)
        }
        SolveMode::Auto if n <= exact::MAX_EXACT_DEGREE => ExactProblem::from_problem(problem).ok(),
        SolveMode::Auto => None,
    };
    match exact_problem {
        Some(ep) => solve_exact(&ep, spec),
        None => solve_float(
            problem,
            spec,
            q.unwrap_or_else(|| default_quadrature_order(n)),
        ),
    }
}

fn solve_exact(problem: &ExactProblem, spec: BasisSpec) -> Result<Solution, SolveError> {
    let n = spec.degree();
    let system = exact::exact_assemble(problem, n)?;
    let float_rows: Vec<Vec<f64>> = system
        .matrix
        .iter()
        .map(|row| row.iter().map(exact::to_f64).collect())
        .collect();
    let condition = condition_or_inf(&DenseMatrix::from_rows(&float_rows));
    let values = exact::solve_rational_system(system.matrix, system.rhs)?;
    warn_if_ill_conditioned(condition, n);
    let (a, b) = problem.interval();
    Ok(Solution {
        basis: spec,
        coefficients: Coefficients::Exact {
            values,
            a: a.clone(),
            b: b.clone(),
        },
        quadrature_order: None,
        condition,
    })
}

fn solve_float(
    problem: &FredholmProblem,
    spec: BasisSpec,
    q: usize,
) -> Result<Solution, SolveError> {
    let n = spec.degree();
    let system = assemble(problem, n, q)?;
    let factors = linalg::lu_factor(&system.matrix, None)?;
    let values = linalg::lu_solve(&factors, &system.rhs)?;
    let condition = condition_or_inf(&system.matrix);
    warn_if_ill_conditioned(condition, n);
    Ok(Solution {
        basis: spec,
        coefficients: Coefficients::Float(values),
        quadrature_order: Some(q),
        condition,
    })
}

/// `φ̃(x) = Σ a_i B_{i,n}(x)`. Points outside the interval are refused.
pub fn evaluate_solution(sol: &Solution, x: f64) -> Result<f64, SolveError> {
    let row = basis::basis_row(&sol.basis, x).map_err(|e| match e {
        BasisError::OutOfInterval { x, a, b } => SolveError::OutOfInterval { x, a, b },
        other => SolveError::Basis(other),
    })?;
    Ok(row
        .iter()
        .zip(sol.coefficients_f64())
        .map(|(b, c)| b * c)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// `|(φ − φ̃)/φ|`
    Relative,
    /// `|φ − φ̃|`, used where `φ` vanishes.
    AbsoluteAtZero,
}

impl ErrorKind {
    pub fn label(self) -> &'static str {
        match self {
            ErrorKind::Relative => "relative",
            ErrorKind::AbsoluteAtZero => "absolute-at-zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub x: f64,
    pub exact: f64,
    pub approx: f64,
    pub error: f64,
    pub kind: ErrorKind,
}

/// Compares `φ̃` with the known solution at each grid point using
/// `E = |(φ − φ̃)/φ|`.
pub fn error_table(
    sol: &Solution,
    exact: &Expr,
    grid: &[f64],
) -> Result<Vec<ErrorRow>, SolveError> {
    grid.iter()
        .map(|&x| {
            let phi = exact.evaluate(x, None).map_err(expr_err("exact"))?;
            let approx = evaluate_solution(sol, x)?;
            let diff = (phi - approx).abs();
            let (error, kind) = if phi.abs() < ZERO_THRESHOLD {
                (diff, ErrorKind::AbsoluteAtZero)
            } else {
                (diff / phi.abs(), ErrorKind::Relative)
            };
            Ok(ErrorRow {
                x,
                exact: phi,
                approx,
                error,
                kind,
            })
        })
        .collect()
}

/// Equispaced points from `a` towards `b`. Without a step the interval is
/// split into ten parts; with a step, points stop at the last one not past
/// `b` (snapping to `b` when the step divides the interval).
pub fn default_grid(a: f64, b: f64, step: Option<f64>) -> Result<Vec<f64>, SolveError> {
    let Some(h) = step else {
        return Ok(equispaced(a, b, 10));
    };
    if !(h.is_finite() && h > 0.0) {
        return Err(SolveError::BadGridStep(h));
    }
    let span = b - a;
    let ratio = span / h;
    let intervals = (ratio + 1e-9).floor();
    if intervals > 1e6 {
        return Err(SolveError::BadGridStep(h));
    }
    let intervals = intervals as usize;
    if ((intervals as f64) - ratio).abs() <= 1e-9 * ratio.max(1.0) {
        return Ok(equispaced(a, b, intervals.max(1)));
    }
    Ok((0..=intervals).map(|k| a + k as f64 * h).collect())
}

fn equispaced(a: f64, b: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|k| {
            if k == intervals {
                b
            } else {
                a + (b - a) * k as f64 / intervals as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub degree: usize,
    pub max_error: f64,
    pub condition: f64,
}

/// Largest error over a 101-point grid for each requested degree.
pub fn convergence_study(
    problem: &FredholmProblem,
    degrees: &[usize],
    mode: SolveMode,
    q: Option<usize>,
) -> Result<Vec<ConvergenceRow>, SolveError> {
    let exact = problem.exact().ok_or(SolveError::MissingExactSolution)?;
    let (a, b) = problem.interval();
    let grid = equispaced(a, b, CONVERGENCE_GRID_POINTS - 1);
    degrees
        .iter()
        .map(|&n| {
            let sol = solve(problem, n, mode, q)?;
            let rows = error_table(&sol, exact, &grid)?;
            let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
            Ok(ConvergenceRow {
                degree: n,
                max_error,
                condition: sol.condition(),
            })
        })
        .collect()
}
