fn main() {
    std::process::exit(kicked_spectra::cli::run(std::env::args_os()));
}
