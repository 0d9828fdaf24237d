fn main() {
    std::process::exit(heisenflow::validation::cli::run_cli(std::env::args_os()));
}
