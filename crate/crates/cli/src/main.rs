fn main() {
    std::process::exit(maass_cli::run(std::env::args()));
}
