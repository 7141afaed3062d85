fn main() {
    std::process::exit(simplexht::cli::run(std::env::args()));
}
