fn main() {
    std::process::exit(graphhom::cli::main_with_args(std::env::args_os()));
}
