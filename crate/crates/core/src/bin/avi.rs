fn main() {
    std::process::exit(avi::cli::main_with_args(std::env::args_os()));
}
