fn main() {
    std::process::exit(hvol::cli::main());
}
