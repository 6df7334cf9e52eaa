fn main() {
    std::process::exit(gcseq::cli::main_with_env());
}
