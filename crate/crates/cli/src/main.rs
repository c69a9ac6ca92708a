fn main() {
    std::process::exit(tscalc_cli::run(std::env::args_os()));
}
