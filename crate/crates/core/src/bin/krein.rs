fn main() {
    std::process::exit(point_interactions::cli::run_from_args(std::env::args_os()));
}
