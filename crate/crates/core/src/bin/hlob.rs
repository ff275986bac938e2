fn main() {
    std::process::exit(hlobachevsky::cli::run(std::env::args_os()));
}
