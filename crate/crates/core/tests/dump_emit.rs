#[test]
fn dump() {
    use typeforge::emit::*;
    use typeforge::fixtures;
    let opts = EmitOptions::new(Target::Pseudo).with_atomic("$");
    let out = emit(&fixtures::palindrome_program(), &opts).unwrap();
    eprintln!("{out}");
}
