fn main() {
    std::process::exit(covercraft::cli::run(std::env::args_os()));
}
