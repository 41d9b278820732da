fn main() {
    std::process::exit(unimod_core::cli::main_with_args(std::env::args_os()));
}
