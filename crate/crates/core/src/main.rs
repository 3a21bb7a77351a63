fn main() {
    std::process::exit(barycheb::harness::run_cli(std::env::args_os()));
}
