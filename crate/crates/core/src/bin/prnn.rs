use clap::Parser;

use prnn::cli::{exit_code, run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Err(e) = run(&cli, &argv) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
