fn main() {
    std::process::exit(symtern::cli::main())
}
