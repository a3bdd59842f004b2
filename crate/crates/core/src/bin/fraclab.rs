fn main() {
    std::process::exit(fraclab::cli::run(std::env::args_os()));
}
