fn main() {
    std::process::exit(coincidental::cli::run_from_env());
}
