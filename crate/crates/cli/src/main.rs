fn main() {
    std::process::exit(uwsemsim_cli::run(std::env::args_os()));
}
