#![no_main]

use fredholm::cli::{parse_problem, write_problem};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 8192 {
        return;
    }
    let Ok(problem) = parse_problem(text) else {
        return;
    };
    let written = write_problem(&problem);
    let again = parse_problem(&written).expect("written problem must parse");
    assert_eq!(write_problem(&again), written);
});
