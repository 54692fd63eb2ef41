fn main() {
    std::process::exit(hecke_core::cli::main_with_env());
}
