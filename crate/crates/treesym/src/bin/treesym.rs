fn main() {
    std::process::exit(treesym::cli::run(std::env::args()));
}
