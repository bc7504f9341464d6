fn main() {
    std::process::exit(cutlab::cli::run(std::env::args_os()));
}
