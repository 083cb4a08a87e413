fn main() {
    std::process::exit(flowmap::run(std::env::args_os()));
}
