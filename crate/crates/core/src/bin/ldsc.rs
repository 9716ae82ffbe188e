fn main() {
    std::process::exit(ldsc::cli::main());
}
