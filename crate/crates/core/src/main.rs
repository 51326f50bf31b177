fn main() {
    std::process::exit(sqpnet::cli::run(std::env::args_os()));
}
