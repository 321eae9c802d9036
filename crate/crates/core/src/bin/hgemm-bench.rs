use clap::Parser;
use hgemm::bench::{run_cli, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run_cli(&cli, &mut std::io::stderr()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
