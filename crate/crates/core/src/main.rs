fn main() {
    std::process::exit(zps_parity::cli::run(std::env::args_os()));
}
