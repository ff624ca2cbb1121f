fn main() {
    std::process::exit(demovec::cli::run(std::env::args_os()));
}
