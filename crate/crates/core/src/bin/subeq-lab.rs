fn main() {
    std::process::exit(subeq_lab::cli::main_with_args(std::env::args_os()));
}
