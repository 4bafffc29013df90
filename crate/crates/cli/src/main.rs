fn main() {
    std::process::exit(sessile_cli::main_with_args(std::env::args_os()));
}
