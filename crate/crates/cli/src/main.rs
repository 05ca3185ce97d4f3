fn main() {
    std::process::exit(klcy_cli::run(std::env::args_os()));
}
