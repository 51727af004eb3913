fn main() {
    std::process::exit(shapes_core::cli::cli_main(std::env::args_os()));
}
