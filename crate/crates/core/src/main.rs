fn main() {
    std::process::exit(typeforge::cli::run(std::env::args()));
}
