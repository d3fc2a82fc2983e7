//! Gauss–Legendre quadrature on finite intervals.
//!
//! Nodes are the roots of the Legendre polynomial `P_q`, found by Newton
//! iteration from Chebyshev-like initial guesses. A `q`-point rule integrates
//! polynomials of degree up to `2q − 1` exactly.

use std::sync::{Arc, OnceLock};

use thiserror::Error;

pub const MAX_ORDER: usize = 128;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadratureError {
    #[error("quadrature order {0} outside 1..={MAX_ORDER}")]
    OrderOutOfRange(usize),
}

/// Nodes (strictly increasing, in `(−1, 1)`) and positive weights of a
/// Gauss–Legendre rule on the reference interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `q`-point rule without touching the cache.
    pub fn generate(q: usize) -> Result<Self, QuadratureError> {
        if !(1..=MAX_ORDER).contains(&q) {
            return Err(QuadratureError::OrderOutOfRange(q));
        }
        let mut nodes = vec![0.0; q];
        let mut weights = vec![0.0; q];
        // roots come in ± pairs; compute the positive half and mirror
        for k in 0..q / 2 {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (q as f64 + 0.5)).cos();
            for _ in 0..NEWTON_MAX_ITER {
                let (p, dp) = legendre(q, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= NEWTON_TOL {
                    break;
                }
            }
            let (_, dp) = legendre(q, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[q - 1 - k] = x;
            nodes[k] = -x;
            weights[q - 1 - k] = w;
            weights[k] = w;
        }
        if q % 2 == 1 {
            let (_, dp) = legendre(q, 0.0);
            nodes[q / 2] = 0.0;
            weights[q / 2] = 2.0 / (dp * dp);
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights affinely mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let points = self.nodes.iter().map(|s| half * s + mid).collect();
        let weights = self.weights.iter().map(|w| half * w).collect();
        (points, weights)
    }
}

/// `P_q(x)` and `P_q'(x)` by the three-term recurrence.
fn legendre(q: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=q {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
    }
    if q == 0 {
        return (1.0, 0.0);
    }
    let dp = q as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

static CACHE: OnceLock<Vec<OnceLock<Arc<QuadratureRule>>>> = OnceLock::new();

/// The `q`-point rule, generated once per order and shared afterwards.
pub fn gauss_legendre(q: usize) -> Result<Arc<QuadratureRule>, QuadratureError> {
    if !(1..=MAX_ORDER).contains(&q) {
        return Err(QuadratureError::OrderOutOfRange(q));
    }
    let slots = CACHE.get_or_init(|| (0..MAX_ORDER).map(|_| OnceLock::new()).collect());
    let rule = slots[q - 1]
        .get_or_init(|| Arc::new(QuadratureRule::generate(q).expect("order validated above")));
    Ok(Arc::clone(rule))
}

/// `∫_a^b f(x) dx` by the given rule.
pub fn integrate_1d(f: impl FnMut(f64) -> f64, a: f64, b: f64, rule: &QuadratureRule) -> f64 {
    let mut f = f;
    try_integrate_1d(|x| Ok::<_, std::convert::Infallible>(f(x)), a, b, rule)
        .unwrap_or_else(|never| match never {})
}

/// Like [`integrate_1d`] for integrands that can fail.
pub fn try_integrate_1d<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> Result<f64, E> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (s, w) in rule.nodes.iter().zip(&rule.weights) {
        sum += w * half * f(half * s + mid)?;
    }
    Ok(sum)
}

/// `∫_a^b ∫_a^b g(t, x) dt dx` by the tensor-product rule.
pub fn integrate_2d(g: impl FnMut(f64, f64) -> f64, a: f64, b: f64, rule: &QuadratureRule) -> f64 {
    let mut g = g;
    try_integrate_2d(
        |t, x| Ok::<_, std::convert::Infallible>(g(t, x)),
        a,
        b,
        rule,
    )
    .unwrap_or_else(|never| match never {})
}

pub fn try_integrate_2d<E>(
    mut g: impl FnMut(f64, f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> Result<f64, E> {
    let (points, weights) = rule.mapped(a, b);
    let mut sum = 0.0;
    for (x, wx) in points.iter().zip(&weights) {
        let mut inner = 0.0;
        for (t, wt) in points.iter().zip(&weights) {
            inner += wt * g(*t, *x)?;
        }
        sum += wx * inner;
    }
    Ok(sum)
}
