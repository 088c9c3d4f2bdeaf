fn main() {
    std::process::exit(equiaffine::cli::run(std::env::args_os()));
}
