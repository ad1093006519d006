fn main() {
    std::process::exit(bernstein_positive::cli::run(std::env::args_os()));
}
