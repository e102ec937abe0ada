fn main() {
    std::process::exit(gnplab::cli::main_with_args(std::env::args_os()));
}
