use clap::Parser;

fn main() {
    let cli = mqnmr::cli::Cli::parse();
    if let Err(err) = mqnmr::cli::run(&cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
