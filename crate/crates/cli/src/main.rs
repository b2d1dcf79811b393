fn main() {
    std::process::exit(hwidth_cli::dispatch(std::env::args_os()));
}
