fn main() {
    std::process::exit(qwalknet::cli::main_with_args(std::env::args_os()));
}
