fn main() {
    std::process::exit(bwl::cli::run(std::env::args_os()));
}
