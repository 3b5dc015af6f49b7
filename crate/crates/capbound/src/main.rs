fn main() {
    std::process::exit(capbound::cli::run_cli(std::env::args_os()));
}
