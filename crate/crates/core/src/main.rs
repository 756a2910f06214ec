fn main() {
    std::process::exit(goeritz::cli::main_entry());
}
