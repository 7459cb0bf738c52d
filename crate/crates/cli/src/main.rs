fn main() {
    std::process::exit(ordembed_cli::run(std::env::args_os()));
}
