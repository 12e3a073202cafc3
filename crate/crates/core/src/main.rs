fn main() {
    let code = swn::cli::run(std::env::args_os());
    std::process::exit(code);
}
