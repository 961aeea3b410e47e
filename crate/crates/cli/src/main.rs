fn main() {
    std::process::exit(quotdeg::run(std::env::args_os()));
}
