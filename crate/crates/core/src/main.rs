fn main() {
    std::process::exit(pcpforge::cli::main_with_args(std::env::args_os()));
}
