fn main() {
    std::process::exit(permtri::cli::run(std::env::args_os()));
}
