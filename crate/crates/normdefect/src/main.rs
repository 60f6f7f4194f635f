use clap::Parser;
use normdefect::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (report, code) = run(&cli.command);
    println!("{}", report.to_json());
    std::process::exit(code);
}
