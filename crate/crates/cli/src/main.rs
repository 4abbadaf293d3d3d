fn main() {
    std::process::exit(polylat_cli::run(std::env::args_os()));
}
