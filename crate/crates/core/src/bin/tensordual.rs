fn main() {
    std::process::exit(tensordual::cli::main_with_args(std::env::args_os()));
}
