fn main() {
    std::process::exit(towerforge_cli::run(std::env::args_os()));
}
