use clap::Parser;

use mdrank_cli::{run, Cli, USAGE_EXIT};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = match run(cli, &mut stdout) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            USAGE_EXIT
        }
    };
    std::process::exit(code);
}
