fn main() {
    std::process::exit(sbandit_core::cli::dispatch(std::env::args_os()));
}
