fn main() {
    std::process::exit(tempeval::cli::run());
}
