fn main() {
    std::process::exit(recall_search::cli::main_with_args(std::env::args_os()));
}
