fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(growfrag::cli::run(&argv));
}
