fn main() {
    std::process::exit(sparsepair::cli::run(std::env::args().collect()));
}
