fn main() {
    std::process::exit(tailfit_cli::run_main());
}
