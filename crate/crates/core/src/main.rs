fn main() {
    std::process::exit(contactlab::cli::main_with_args(std::env::args_os()));
}
