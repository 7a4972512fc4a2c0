fn main() {
    std::process::exit(besov_pick::cli::run_from(std::env::args_os()));
}
