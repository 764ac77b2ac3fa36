fn main() {
    std::process::exit(tallone::cli::main_with_args(std::env::args_os()));
}
