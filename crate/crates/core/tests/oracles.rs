//! Values checked against independent oracles: composite Simpson sums,
//! cofactor-based inverses, degree elevation and hand integration.

mod common;

use fredholm::basis::{basis_integral, bernstein_value, BasisSpec};
use fredholm::exact::{self, BivarPoly, ExactProblem, PolyVar, Rational};
use fredholm::expr::Expr;
use fredholm::linalg::{condition_1norm, lu_factor, lu_solve, DenseMatrix};
use fredholm::quadrature::{gauss_legendre, integrate_1d, integrate_2d};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn poly(s: &str) -> BivarPoly {
    s.parse::<Expr>().unwrap().to_polynomial().unwrap()
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[test]
fn basis_integrals_match_simpson() {
    let s3 = BasisSpec::new(3, -1.0, 1.0).unwrap();
    for i in 0..=3 {
        let oracle = common::simpson(|x| bernstein_value(i, &s3, x).unwrap(), -1.0, 1.0, 2000);
        assert!((oracle - 0.5).abs() < 1e-12, "i={i}: {oracle}");
        assert_eq!(basis_integral(i as usize, &s3).unwrap(), 0.5);
    }
    let s10 = BasisSpec::new(10, 0.0, 1.0).unwrap();
    let oracle = common::simpson(|x| bernstein_value(4, &s10, x).unwrap(), 0.0, 1.0, 2000);
    assert!((oracle - 1.0 / 11.0).abs() < 1e-12);
    assert!((basis_integral(4, &s10).unwrap() - oracle).abs() < 1e-12);
}

/// Inverse by cofactors: `A⁻¹ = adj(A) / det(A)`.
#[allow(clippy::needless_range_loop)]
fn adjugate_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    fn det(m: &[Vec<f64>]) -> f64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * det(&minor(m, 0, j))
            })
            .sum()
    }
    fn minor(m: &[Vec<f64>], row: usize, col: usize) -> Vec<Vec<f64>> {
        m.iter()
            .enumerate()
            .filter(|(i, _)| *i != row)
            .map(|(_, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect()
    }
    let d = det(a);
    let n = a.len();
    let mut inv = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[j][i] = sign * det(&minor(a, i, j)) / d;
        }
    }
    inv
}

fn norm_1(m: &[Vec<f64>]) -> f64 {
    (0..m.len())
        .map(|j| m.iter().map(|row| row[j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[test]
fn bernstein_gram_condition_matches_adjugate_oracle() {
    // ∫_0^1 B_{i,3} B_{j,3} = C(3,i) C(3,j) / (7 C(6,i+j))
    let gram: Vec<Vec<f64>> = (0..4u64)
        .map(|i| {
            (0..4u64)
                .map(|j| (binom(3, i) * binom(3, j)) as f64 / (7 * binom(6, i + j)) as f64)
                .collect()
        })
        .collect();
    let oracle = norm_1(&gram) * norm_1(&adjugate_inverse(&gram));
    let got = condition_1norm(&DenseMatrix::from_rows(&gram)).unwrap();
    assert!(got > 1.0);
    assert!((got - oracle).abs() <= 1e-6 * oracle, "{got} vs {oracle}");
}

#[test]
fn small_solve_by_substitution() {
    let a = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]);
    let x = lu_solve(&lu_factor(&a, None).unwrap(), &[5.0, 10.0]).unwrap();
    // back substitution: 2·1 + 3 = 5, 1 + 3·3 = 10
    assert!((x[0] - 1.0).abs() < 1e-14);
    assert!((x[1] - 3.0).abs() < 1e-14);
}

#[test]
fn legendre_roots_match_closed_forms() {
    // P_2 = (3x² − 1)/2, P_3 = (5x³ − 3x)/2
    let r2 = gauss_legendre(2).unwrap();
    for &node in r2.nodes() {
        assert!((3.0 * node * node - 1.0).abs() < 1e-15);
    }
    let r3 = gauss_legendre(3).unwrap();
    for &node in r3.nodes() {
        assert!((5.0 * node.powi(3) - 3.0 * node).abs() < 1e-15);
    }
}

#[test]
fn quadrature_against_analytic_integrals() {
    for q in 1..=20usize {
        let rule = gauss_legendre(q).unwrap();
        let got = integrate_1d(|x| x.powi(2 * q as i32 - 1), 0.0, 1.0, &rule);
        assert!((got - 1.0 / (2 * q) as f64).abs() <= 1e-13);
    }
    let r8 = gauss_legendre(8).unwrap();
    let oracle = common::simpson(|s| s * s, -1.0, 1.0, 100).powi(2);
    assert!((integrate_2d(|t, x| x * x * t * t, -1.0, 1.0, &r8) - oracle).abs() <= 1e-13);
    assert!((oracle - 4.0 / 9.0).abs() <= 1e-13);
}

#[test]
fn fourth_example_first_load_is_analytic() {
    // ∫_0^1 e^x (1−x)^3 dx = 6e − 16 by repeated integration by parts
    let e = std::f64::consts::E;
    let analytic = 6.0 * e - 16.0;
    let oracle = common::simpson(|x| x.exp() * (1.0 - x).powi(3), 0.0, 1.0, 4000);
    assert!((analytic - oracle).abs() < 1e-12);
    let p = fredholm::cli::builtin("example4").unwrap();
    let sys = fredholm::galerkin::assemble(&p, 3, 32).unwrap();
    assert!((sys.rhs[0] - analytic).abs() <= 1e-12);
}

#[test]
fn binomial_expansion_of_powers() {
    for k in 0..=8u32 {
        let p = poly(&format!("(x+t)^{k}"));
        assert_eq!(p.len(), k as usize + 1);
        for j in 0..=k {
            let expected = Rational::from_integer(BigInt::from(binom(k as u64, j as u64)));
            assert_eq!(p.coeff(j, k - j), expected, "k={k} j={j}");
        }
    }
}

#[test]
fn termwise_t_integration() {
    let (a, b) = (r(-1, 1), r(1, 1));
    assert_eq!(poly("t^2").integrate_t(&a, &b), poly("2/3"));
    assert_eq!(poly("x*t + x^2*t^2").integrate_t(&a, &b), poly("2/3*x^2"));
    assert_eq!(poly("t").integrate_t(&r(0, 1), &r(1, 1)), poly("1/2"));
}

#[test]
fn second_example_degree_zero_by_hand() {
    // C_00 = ∫ 1 dx − ∫ (∫ (x⁴ − t⁴) dt) dx = 2 − (2/5·2 − 2/5·2) = 2
    let p = ExactProblem::new(
        poly("1"),
        r(-1, 1),
        poly("x^4 - t^4"),
        poly("x"),
        r(-1, 1),
        r(1, 1),
    )
    .unwrap();
    let sys = exact::exact_assemble(&p, 0).unwrap();
    assert_eq!(sys.matrix[0][0], r(2, 1));
}

#[test]
fn bernstein_expansion_by_hand() {
    // 2·(t+1)(1−t)/4
    let b = exact::bernstein_poly_exact(1, 2, &r(-1, 1), &r(1, 1), PolyVar::T).unwrap();
    assert_eq!(b, poly("(1 - t^2)/2"));
}

/// Bernstein coefficients on [0,1] of `Σ c_k x^k`, elevated to degree `n`:
/// `b_k = Σ_{j≤k} C(k,j)/C(n,j) c_j`.
fn monomial_to_bernstein_unit(c: &[Rational], n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            (0..=k.min(c.len() - 1))
                .map(|j| {
                    &c[j]
                        * Rational::new(
                            BigInt::from(binom(k as u64, j as u64)),
                            BigInt::from(binom(n as u64, j as u64)),
                        )
                })
                .fold(Rational::zero(), |acc, v| acc + v)
        })
        .collect()
}

#[test]
fn third_example_coefficients_by_degree_elevation() {
    let monomial = [r(0, 1), r(180, 119), r(80, 119)];
    let oracle = monomial_to_bernstein_unit(&monomial, 3);
    assert_eq!(oracle, vec![r(0, 1), r(60, 119), r(440, 357), r(260, 119)]);

    let p = ExactProblem::new(
        poly("1"),
        r(-1, 1),
        poly("t*x^2 + x*t^2"),
        poly("x"),
        r(0, 1),
        r(1, 1),
    )
    .unwrap();
    for n in 2..=6 {
        let got = exact::exact_solve(&p, n).unwrap();
        assert_eq!(got, monomial_to_bernstein_unit(&monomial, n), "n={n}");
    }
    // the endpoint value φ(1) = 260/119 is the last coefficient
    let phi_at_one: Rational = monomial.iter().fold(Rational::zero(), |acc, c| acc + c);
    assert_eq!(phi_at_one, r(260, 119));
    assert!(!phi_at_one.is_zero() && !phi_at_one.is_one());
}
