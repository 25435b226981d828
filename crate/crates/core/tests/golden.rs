//! Emission stability: the checked-in source renderings of the flagship
//! programs reproduce byte-for-byte modulo whitespace and comments, under
//! their recorded manglings.

use typeforge::emit::{emit, normalize_source, EmitOptions, Target};
use typeforge::fixtures;

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("golden file exists")
}

#[test]
fn listing_c1_java() {
    let out = emit(
        &fixtures::anbncn_deep(),
        &EmitOptions::new(Target::Java).with_unit("Zero"),
    )
    .unwrap();
    assert_eq!(normalize_source(&out), normalize_source(&golden("listing_c1.java")));
}

#[test]
fn turing_anbn_cpp() {
    let out = emit(&fixtures::turing_cc_program(), &EmitOptions::new(Target::Cpp)).unwrap();
    assert_eq!(normalize_source(&out), normalize_source(&golden("turing_anbn.cpp")));
}

#[test]
fn listing_ww_cpp() {
    let out = emit(
        &fixtures::ww_full_typeof(),
        &EmitOptions::new(Target::Cpp).with_mangle("$", "$"),
    )
    .unwrap();
    assert_eq!(normalize_source(&out), normalize_source(&golden("listing_ww.cpp")));
}

#[test]
fn palindrome_pseudo() {
    let out = emit(
        &fixtures::palindrome_program(),
        &EmitOptions::new(Target::Pseudo).with_atomic("$"),
    )
    .unwrap();
    assert_eq!(normalize_source(&out), normalize_source(&golden("palindrome.pseudo")));
}

#[test]
fn emission_is_byte_stable() {
    for _ in 0..2 {
        let a = emit(&fixtures::turing_cc_program(), &EmitOptions::new(Target::Cpp)).unwrap();
        let b = emit(&fixtures::turing_cc_program(), &EmitOptions::new(Target::Cpp)).unwrap();
        assert_eq!(a, b);
    }
}
