fn main() {
    std::process::exit(luxforge_workbench::cli::main());
}
