fn main() {
    std::process::exit(cho_spectra::cli::main());
}
