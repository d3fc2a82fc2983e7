#![allow(dead_code)]

use fredholm::basis::{bernstein_value, BasisSpec};
use fredholm::galerkin::{evaluate_solution, FredholmProblem, Solution};
use fredholm::quadrature::gauss_legendre;

pub const EXPRESSION_CORPUS: &str = include_str!("../data/expressions.txt");

pub fn corpus() -> Vec<&'static str> {
    EXPRESSION_CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect()
}

/// Galerkin residuals `∫ [a φ̃ + λ ∫ k φ̃ dt − f] B_j dx`, computed directly
/// from the solution rather than from the assembled system.
pub fn galerkin_residuals(problem: &FredholmProblem, sol: &Solution, q: usize) -> Vec<f64> {
    let (a, b) = problem.interval();
    let rule = gauss_legendre(q).unwrap();
    let (points, weights) = rule.mapped(a, b);
    let spec: &BasisSpec = sol.basis();
    let lambda = problem.lambda().value();
    let phi: Vec<f64> = points
        .iter()
        .map(|&x| evaluate_solution(sol, x).unwrap())
        .collect();
    let residual: Vec<f64> = points
        .iter()
        .map(|&x| {
            let integral: f64 = points
                .iter()
                .zip(&weights)
                .zip(&phi)
                .map(|((&t, w), p)| w * problem.kernel().evaluate(x, Some(t)).unwrap() * p)
                .sum();
            let ax = problem.coefficient().evaluate(x, None).unwrap();
            let fx = problem.rhs().evaluate(x, None).unwrap();
            ax * evaluate_solution(sol, x).unwrap() + lambda * integral - fx
        })
        .collect();
    (0..spec.len())
        .map(|j| {
            points
                .iter()
                .zip(&weights)
                .zip(&residual)
                .map(|((&x, w), r)| w * r * bernstein_value(j as i64, spec, x).unwrap())
                .sum()
        })
        .collect()
}

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}
