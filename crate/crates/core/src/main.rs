fn main() {
    std::process::exit(fkdv::cli::run(std::env::args_os()));
}
