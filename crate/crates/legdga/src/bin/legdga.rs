fn main() {
    std::process::exit(legdga::cli::main());
}
