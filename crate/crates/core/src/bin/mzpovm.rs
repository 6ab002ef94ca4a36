fn main() {
    std::process::exit(mzpovm::cli::main_from_env());
}
