fn main() {
    std::process::exit(lawson_forge::cli::run(std::env::args_os()));
}
