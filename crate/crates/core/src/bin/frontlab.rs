use clap::Parser;

fn main() {
    frontlab::cli::init_threads();
    std::process::exit(frontlab::cli::run(frontlab::cli::Cli::parse()));
}
