fn main() {
    std::process::exit(christoffel_thread::cli::run(std::env::args_os()));
}
