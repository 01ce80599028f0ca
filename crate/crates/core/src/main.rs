fn main() {
    std::process::exit(flockconf::cli::main_with_args(std::env::args_os()));
}
