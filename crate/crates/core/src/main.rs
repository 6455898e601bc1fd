fn main() {
    std::process::exit(plate_ham::cli::run_command(std::env::args_os()));
}
