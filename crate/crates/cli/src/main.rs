fn main() {
    std::process::exit(lflab_cli::run_cli(std::env::args_os()));
}
