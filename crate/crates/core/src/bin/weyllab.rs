fn main() {
    std::process::exit(weyllab::cli::run(std::env::args_os()));
}
