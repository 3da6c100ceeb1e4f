fn main() {
    std::process::exit(hopim::cli::run(std::env::args_os()));
}
