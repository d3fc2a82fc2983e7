#![no_main]

use fredholm::expr::Expr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 4096 {
        return;
    }
    let Ok(expr) = text.parse::<Expr>() else {
        return;
    };
    let printed = expr.to_string();
    let again: Expr = printed.parse().expect("printed expression must parse");
    assert_eq!(again, expr);
    let _ = expr.evaluate(0.5, Some(-0.25));
    if let Some(p) = expr.to_polynomial() {
        let _ = p.evaluate_f64(0.5, -0.25);
    }
});
