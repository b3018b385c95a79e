fn main() {
    std::process::exit(stochpot::cli::run(std::env::args_os()));
}
