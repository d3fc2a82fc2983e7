//! The four worked problems, each written as `φ(x) − ∫ k(t,x) φ(t) dt = f(x)`,
//! i.e. `a ≡ 1` and `λ = −1`.

use crate::galerkin::{Constant, FredholmProblem};

use super::CliError;

pub const BUILTIN_NAMES: [&str; 4] = ["example1", "example2", "example3", "example4"];

struct Builtin {
    kernel: &'static str,
    rhs: &'static str,
    a: i64,
    b: i64,
    exact: &'static str,
}

const BUILTINS: [Builtin; 4] = [
    Builtin {
        kernel: "x*t + x^2*t^2",
        rhs: "1",
        a: -1,
        b: 1,
        exact: "1 + 10/9*x^2",
    },
    Builtin {
        kernel: "x^4 - t^4",
        rhs: "x",
        a: -1,
        b: 1,
        exact: "x",
    },
    Builtin {
        kernel: "t*x^2 + x*t^2",
        rhs: "x",
        a: 0,
        b: 1,
        exact: "180/119*x + 80/119*x^2",
    },
    Builtin {
        kernel: "2*exp(x)*exp(t)",
        rhs: "exp(x)",
        a: 0,
        b: 1,
        exact: "exp(x)/(2 - e^2)",
    },
];

/// Looks up a builtin problem by name.
pub fn builtin(name: &str) -> Result<FredholmProblem, CliError> {
    let index = BUILTIN_NAMES
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| CliError::UnknownBuiltin(name.to_string()))?;
    let spec = &BUILTINS[index];
    let parse = |s: &str| s.parse().expect("builtin expressions are valid");
    let problem = FredholmProblem::new(
        parse("1"),
        Constant::integer(-1),
        parse(spec.kernel),
        parse(spec.rhs),
        Constant::integer(spec.a),
        Constant::integer(spec.b),
        Some(parse(spec.exact)),
    )
    .expect("builtin problems are well formed");
    Ok(problem)
}
