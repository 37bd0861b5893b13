fn main() {
    std::process::exit(secm::cli::main_with_args(std::env::args_os()));
}
