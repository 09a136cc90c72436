use clap::Parser;

fn main() {
    let cli = wmsn::cli::Cli::parse();
    if let Err(e) = wmsn::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
