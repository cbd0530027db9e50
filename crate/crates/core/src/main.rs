fn main() {
    std::process::exit(recolor::cli::run(std::env::args_os()));
}
