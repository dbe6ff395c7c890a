fn main() {
    std::process::exit(quadcone::cli::run(std::env::args_os()));
}
