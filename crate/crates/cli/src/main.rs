fn main() {
    std::process::exit(bbcert_cli::run(std::env::args_os()));
}
