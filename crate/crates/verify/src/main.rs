fn main() {
    std::process::exit(xmop_verify::cli::main_with_args(std::env::args_os()));
}
