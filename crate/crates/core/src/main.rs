fn main() {
    std::process::exit(mubarg::cli::run(std::env::args_os()));
}
