fn main() {
    std::process::exit(repelcircle::run(std::env::args_os()));
}
