fn main() {
    std::process::exit(ptbound::cli::run(std::env::args_os()));
}
