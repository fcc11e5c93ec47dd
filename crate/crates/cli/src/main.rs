fn main() {
    std::process::exit(asmdist_cli::main_with(std::env::args_os()));
}
