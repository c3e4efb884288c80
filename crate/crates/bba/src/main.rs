fn main() {
    std::process::exit(bba::cli::run_from_env());
}
