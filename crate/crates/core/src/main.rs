fn main() {
    std::process::exit(compack::cli::run(std::env::args_os()));
}
