use clap::Parser;

fn main() {
    let cli = cvk::cli::Cli::parse();
    std::process::exit(cvk::cli::run(cli));
}
