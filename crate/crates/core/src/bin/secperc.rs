fn main() {
    std::process::exit(secrecy_percolation::cli::main_with_args(std::env::args_os()));
}
