fn main() {
    std::process::exit(tws_persist::cli::main());
}
