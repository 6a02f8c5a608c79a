fn main() {
    std::process::exit(poncelet::run(std::env::args_os()));
}
