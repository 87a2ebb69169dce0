fn main() {
    std::process::exit(netkrig_cli::main_entry());
}
