fn main() {
    std::process::exit(ccrflow_cli::run(std::env::args_os()));
}
