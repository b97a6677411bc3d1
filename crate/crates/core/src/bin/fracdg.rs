fn main() {
    std::process::exit(fracdg::xcli::main_with_args(std::env::args_os()));
}
