fn main() {
    std::process::exit(fracwave_cli::run(std::env::args_os()));
}
