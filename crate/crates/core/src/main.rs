fn main() {
    std::process::exit(momx::cli::main_with_args(std::env::args_os()));
}
