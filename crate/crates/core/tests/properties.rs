mod common;

use fredholm::basis::{
    basis_row, bernstein_to_monomial, bernstein_value, eval_monomial, BasisSpec,
};
use fredholm::exact::{self, to_f64, BivarPoly, PolyVar, Rational};
use fredholm::expr::{BinOp, Expr, Func, NamedConst, Var};
use fredholm::galerkin::{self, FredholmProblem, SolveMode};
use fredholm::linalg::{lu_factor, lu_solve, DenseMatrix};
use fredholm::quadrature::{gauss_legendre, integrate_1d};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn literal() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000).prop_map(|v| v.to_string()),
        (0u32..100, 0u32..1000).prop_map(|(i, f)| format!("{i}.{f:03}")),
        (1u32..10, -5i32..5).prop_map(|(m, e)| format!("{m}e{e}")),
    ]
    .prop_map(|text| {
        let value = text.parse().unwrap();
        Expr::Number { text, value }
    })
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        literal(),
        Just(Expr::Var(Var::X)),
        Just(Expr::Var(Var::T)),
        Just(Expr::Const(NamedConst::Pi)),
        Just(Expr::Const(NamedConst::E)),
    ]
}

fn binop() -> impl Strategy<Value = BinOp> {
    prop_oneof![
        Just(BinOp::Add),
        Just(BinOp::Sub),
        Just(BinOp::Mul),
        Just(BinOp::Div),
        Just(BinOp::Pow),
    ]
}

fn func() -> impl Strategy<Value = Func> {
    prop_oneof![
        Just(Func::Exp),
        Just(Func::Sin),
        Just(Func::Cos),
        Just(Func::Log),
        Just(Func::Sqrt),
    ]
}

fn any_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (binop(), inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (func(), inner).prop_map(|(func, arg)| Expr::Call {
                func,
                arg: Box::new(arg)
            }),
        ]
    })
}

/// Polynomial expressions with small coefficients and exponents.
fn poly_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u64..10).prop_map(Expr::number),
        Just(Expr::Var(Var::X)),
        Just(Expr::Var(Var::T)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Add, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Sub, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Mul, l, r)),
            (inner.clone(), 1u64..8).prop_map(|(l, d)| Expr::binary(
                BinOp::Div,
                l,
                Expr::number(d)
            )),
            (inner, 0u64..4).prop_map(|(l, k)| Expr::binary(BinOp::Pow, l, Expr::number(k))),
        ]
    })
}

fn interval() -> impl Strategy<Value = (f64, f64)> {
    (-10.0f64..10.0, 0.01f64..20.0).prop_map(|(a, w)| (a, a + w))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn square_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=10)
        .prop_flat_map(|m| prop::collection::vec(prop::collection::vec(-1.0f64..1.0, m), m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_expressions_reparse(e in any_expr()) {
        let printed = e.to_string();
        let again: Expr = printed.parse().unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn polynomial_conversion_agrees_with_evaluation(
        e in poly_expr(),
        points in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 100),
    ) {
        let p = e.to_polynomial().expect("polynomial expression");
        for (x, t) in points {
            let direct = e.evaluate(x, Some(t)).unwrap();
            let via = p.evaluate_f64(x, t);
            prop_assert!((direct - via).abs() <= 1e-12 * direct.abs().max(1.0),
                "{e} at ({x}, {t}): {direct} vs {via}");
        }
    }

    #[test]
    fn printing_preserves_value(e in poly_expr(), x in -1.0f64..1.0, t in -1.0f64..1.0) {
        let again: Expr = e.to_string().parse().unwrap();
        prop_assert_eq!(e.evaluate(x, Some(t)).unwrap(), again.evaluate(x, Some(t)).unwrap());
    }

    #[test]
    fn parser_never_panics(s in "[-+*/^()xtepi0-9. a-z]{0,40}") {
        let _ = s.parse::<Expr>();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn basis_is_partition_of_unity(n in 0usize..=30, (a, b) in interval(), s in 0.0f64..=1.0) {
        let spec = BasisSpec::new(n, a, b).unwrap();
        let x = (a + s * (b - a)).min(b);
        let row = basis_row(&spec, x).unwrap();
        let sum: f64 = row.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");
        prop_assert!(row.iter().all(|&v| v >= 0.0));
    }
}

proptest! {
    #[test]
    fn row_matches_closed_form(n in 0usize..=20, (a, b) in interval(), s in 0.0f64..=1.0) {
        let spec = BasisSpec::new(n, a, b).unwrap();
        let x = (a + s * (b - a)).min(b);
        let row = basis_row(&spec, x).unwrap();
        for (i, v) in row.iter().enumerate() {
            let closed = bernstein_value(i as i64, &spec, x).unwrap();
            prop_assert!((v - closed).abs() <= 1e-12);
        }
        prop_assert_eq!(bernstein_value(-1, &spec, x).unwrap(), 0.0);
        prop_assert_eq!(bernstein_value(n as i64 + 1, &spec, x).unwrap(), 0.0);
    }

    #[test]
    fn basis_interpolates_endpoints(n in 0usize..=30, (a, b) in interval()) {
        let spec = BasisSpec::new(n, a, b).unwrap();
        let left = basis_row(&spec, a).unwrap();
        let right = basis_row(&spec, b).unwrap();
        for i in 0..=n {
            prop_assert_eq!(left[i], if i == 0 { 1.0 } else { 0.0 });
            prop_assert_eq!(right[i], if i == n { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn basis_is_symmetric(n in 0usize..=20, (a, b) in interval(), s in 0.0f64..=1.0) {
        let spec = BasisSpec::new(n, a, b).unwrap();
        let d = s * (b - a);
        for i in 0..=n {
            let lhs = bernstein_value(i as i64, &spec, a + d).unwrap();
            let rhs = bernstein_value((n - i) as i64, &spec, b - d).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12, "i={i}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn monomial_form_matches_bernstein_sum(
        coeffs in prop::collection::vec(-5.0f64..5.0, 1..=9),
        (a, b) in (-2.0f64..2.0, 0.5f64..3.0).prop_map(|(a, w)| (a, a + w)),
        s in 0.0f64..=1.0,
    ) {
        let spec = BasisSpec::new(coeffs.len() - 1, a, b).unwrap();
        let x = (a + s * (b - a)).min(b);
        let monomial = bernstein_to_monomial(&coeffs, &a, &b);
        let direct: f64 = basis_row(&spec, x).unwrap().iter().zip(&coeffs).map(|(v, c)| v * c).sum();
        let via = eval_monomial(&monomial, x);
        // the monomial sum cancels, so scale by the size of its terms
        let scale: f64 = monomial.iter().enumerate().map(|(k, m)| (m * x.powi(k as i32)).abs()).sum();
        prop_assert!((direct - via).abs() <= 1e-10 * scale.max(1.0), "{direct} vs {via}");
    }

    #[test]
    fn rational_monomial_form_is_exact(
        coeffs in prop::collection::vec(rational(), 1..=7),
        a in rational(),
        w in (1i64..50, 1i64..10).prop_map(|(n, d)| Rational::new(n.into(), d.into())),
        x in rational(),
    ) {
        let b = &a + &w;
        let n = coeffs.len() - 1;
        let monomial = bernstein_to_monomial(&coeffs, &a, &b);
        let direct = (0..=n).fold(Rational::zero(), |acc, i| {
            let basis = exact::bernstein_poly_exact(i, n, &a, &b, PolyVar::X).unwrap();
            acc + &coeffs[i] * basis.evaluate(&x, &Rational::zero())
        });
        let via = BivarPoly::from_univariate(&monomial, PolyVar::X).evaluate(&x, &Rational::zero());
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn exact_basis_sums_to_one(n in 0usize..=12, a in rational(), w in 1i64..20) {
        let b = &a + Rational::from_integer(BigInt::from(w));
        let sum = (0..=n).fold(BivarPoly::zero(), |acc, i| {
            &acc + &exact::bernstein_poly_exact(i, n, &a, &b, PolyVar::T).unwrap()
        });
        prop_assert_eq!(sum, BivarPoly::constant(Rational::one()));
    }

    #[test]
    fn gauss_rule_is_exact_to_degree_2q_minus_1(
        q in 1usize..=20,
        raw in prop::collection::vec(-1.0f64..1.0, 40),
        (a, b) in (-3.0f64..3.0, 0.1f64..2.0).prop_map(|(a, w)| (a, a + w)),
    ) {
        let coeffs = &raw[..2 * q];
        let rule = gauss_legendre(q).unwrap();
        let got = integrate_1d(|x| eval_monomial(coeffs, x), a, b, &rule);
        let antiderivative = |x: f64| {
            coeffs.iter().enumerate().rev().fold(0.0, |acc, (k, c)| acc * x + c / (k + 1) as f64) * x
        };
        let want = antiderivative(b) - antiderivative(a);
        let scale: f64 = coeffs.iter().map(|c| c.abs()).sum::<f64>() * a.abs().max(b.abs()).max(1.0).powi(2 * q as i32);
        prop_assert!((got - want).abs() <= 1e-12 * scale, "q={q}: {got} vs {want}");
    }

    #[test]
    fn gauss_rule_is_linear(
        q in 1usize..=40,
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
    ) {
        let rule = gauss_legendre(q).unwrap();
        let f = |x: f64| x.sin();
        let g = |x: f64| x.exp();
        let combined = integrate_1d(|x| alpha * f(x) + beta * g(x), 0.0, 2.0, &rule);
        let separate = alpha * integrate_1d(f, 0.0, 2.0, &rule) + beta * integrate_1d(g, 0.0, 2.0, &rule);
        prop_assert!((combined - separate).abs() <= 1e-13 * (alpha.abs() + beta.abs()).max(1.0) * 10.0);
    }

    #[test]
    fn lu_reconstructs_permuted_matrix(rows in square_matrix()) {
        let a = DenseMatrix::from_rows(&rows);
        let Ok(factors) = lu_factor(&a, None) else { return Ok(()); };
        let lu = factors.lower().mul(&factors.upper());
        let m = a.rows();
        for (i, &p) in factors.permutation().iter().enumerate() {
            for j in 0..m {
                prop_assert!((lu[(i, j)] - a[(p, j)]).abs() <= 1e-12 * a.norm_inf());
            }
        }
        let mut perm = factors.permutation().to_vec();
        let mut swaps = 0;
        for i in 0..m {
            while perm[i] != i {
                let k = perm[i];
                perm.swap(i, k);
                swaps += 1;
            }
        }
        prop_assert_eq!(factors.parity(), if swaps % 2 == 0 { 1 } else { -1 });
    }

    #[test]
    fn lu_solution_has_small_residual(rows in square_matrix(), seed in any::<u64>()) {
        let a = DenseMatrix::from_rows(&rows);
        let Ok(factors) = lu_factor(&a, None) else { return Ok(()); };
        let m = a.rows();
        let b: Vec<f64> = (0..m).map(|i| ((seed >> (i % 64)) & 0xff) as f64 / 255.0 - 0.5).collect();
        let x = lu_solve(&factors, &b).unwrap();
        let x_norm = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        for (lhs, rhs) in a.mul_vec(&x).iter().zip(&b) {
            prop_assert!((lhs - rhs).abs() <= 1e-10 * a.norm_inf() * x_norm.max(1.0));
        }
    }

    #[test]
    fn rational_addition_is_cross_multiplication(
        (a, b) in (-10_000i64..10_000, 1i64..10_000),
        (c, d) in (-10_000i64..10_000, 1i64..10_000),
    ) {
        let lhs = Rational::new(a.into(), b.into()) + Rational::new(c.into(), d.into());
        let rhs = Rational::new(BigInt::from(a * d + c * b), BigInt::from(b * d));
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!(to_f64(&lhs).is_finite());
    }

    #[test]
    fn float_and_exact_paths_agree(
        k1 in -3i64..=3, k2 in -3i64..=3, k3 in -3i64..=3,
        f0 in -3i64..=3, f1 in -3i64..=3,
        n in 1usize..=5,
    ) {
        let kernel: Expr = format!("({k1})*x*t + ({k2})*x^2 + ({k3})*t^3/4").parse().unwrap();
        let rhs: Expr = format!("({f0}) + ({f1})*x").parse().unwrap();
        let problem = FredholmProblem::new(
            Expr::number(1),
            galerkin::Constant::from_expr("1/4".parse().unwrap()).unwrap(),
            kernel,
            rhs,
            galerkin::Constant::integer(0),
            galerkin::Constant::integer(1),
            None,
        ).unwrap();
        let float = galerkin::solve(&problem, n, SolveMode::Float, None);
        let exact = galerkin::solve(&problem, n, SolveMode::Exact, None);
        match (float, exact) {
            (Ok(f), Ok(e)) => {
                prop_assume!(f.condition() < 1e8);
                for (a, b) in f.coefficients_f64().iter().zip(e.coefficients_f64()) {
                    prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
                }
            }
            (Err(_), Err(_)) => {}
            (Ok(f), Err(_)) => prop_assert!(f.condition() > 1e10),
            (Err(_), Ok(_)) => {}
        }
    }
}

#[test]
fn corpus_round_trips() {
    for text in common::corpus() {
        let e: Expr = text.parse().unwrap_or_else(|err| panic!("{text}: {err}"));
        let printed = e.to_string();
        assert_eq!(printed.parse::<Expr>().unwrap(), e, "{text}");
    }
}

#[test]
fn corpus_polynomials_agree_with_evaluation() {
    let points = [(-0.9, 0.3), (0.0, 0.0), (0.5, -0.25), (1.0, 1.0)];
    let mut polynomial = 0;
    for text in common::corpus() {
        let e: Expr = text.parse().unwrap();
        let Some(p) = e.to_polynomial() else { continue };
        polynomial += 1;
        for (x, t) in points {
            let Ok(direct) = e.evaluate(x, Some(t)) else {
                continue;
            };
            let via = p.evaluate_f64(x, t);
            assert!(
                (direct - via).abs() <= 1e-12 * direct.abs().max(1.0),
                "{text}"
            );
        }
    }
    assert!(polynomial >= 10);
}
