fn main() {
    std::process::exit(salpeter::cli::cli_main(std::env::args_os()));
}
