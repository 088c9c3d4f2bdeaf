//! Drives the command-line verifier as a library and prints the JSON report.

fn main() {
    let code = equiaffine::cli::run(["equiaffine", "verify", "flat:3", "slr:3", "--points", "2", "--seed", "7"]);
    std::process::exit(code);
}
