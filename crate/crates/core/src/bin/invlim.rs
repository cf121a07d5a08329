fn main() {
    std::process::exit(invlim::cli::run(std::env::args_os()));
}
