use clap::Parser;
use curvkit::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli.command);
    match &outcome {
        Ok(report) => {
            println!("{}", report.to_json());
            eprint!("{}", report.summary());
        }
        Err(e) => eprintln!("curvkit {}: {e}", cli.command.name()),
    }
    std::process::exit(exit_code(&outcome));
}
