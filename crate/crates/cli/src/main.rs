fn main() {
    std::process::exit(weylcover_cli::main_entry());
}
