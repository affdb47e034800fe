fn main() {
    let code = odhl::cli::main_with(std::env::args());
    std::process::exit(code);
}
