fn main() {
    std::process::exit(discrete_hardy::cli::run());
}
