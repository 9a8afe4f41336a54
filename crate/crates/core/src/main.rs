fn main() {
    std::process::exit(chaoscause::cli::run(std::env::args_os()));
}
