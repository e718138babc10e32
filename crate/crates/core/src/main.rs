fn main() {
    std::process::exit(loopexp::cli::run(std::env::args_os()));
}
