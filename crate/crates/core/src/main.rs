fn main() {
    env_logger::init();
    std::process::exit(ggm_eval::cli::run(std::env::args_os()));
}
