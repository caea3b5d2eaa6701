fn main() {
    std::process::exit(molres::cli::run(std::env::args_os()));
}
