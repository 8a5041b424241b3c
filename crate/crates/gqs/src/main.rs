fn main() {
    std::process::exit(gqs::cli::run(std::env::args_os()));
}
