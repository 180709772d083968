fn main() {
    std::process::exit(corrnet::cli::run(std::env::args_os()));
}
