fn main() {
    std::process::exit(triad::cli::main());
}
