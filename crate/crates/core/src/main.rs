fn main() {
    std::process::exit(local_unitary::cli::main_with_args(std::env::args_os()));
}
