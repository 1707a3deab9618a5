fn main() {
    std::process::exit(causal_cli::app::run(std::env::args_os()));
}
