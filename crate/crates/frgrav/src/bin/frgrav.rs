fn main() {
    std::process::exit(frgrav::cli::main_with_args(std::env::args_os()));
}
