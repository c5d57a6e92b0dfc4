fn main() {
    std::process::exit(freecircle::cli::run(std::env::args_os()));
}
