use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use ptcubic::{run, Cli, CliError, RunConfig};

fn report(err: &CliError) -> ExitCode {
    let record = serde_json::to_string(&err.record()).unwrap_or_else(|_| err.to_string());
    let _ = writeln!(io::stderr(), "{record}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("invalid arguments");
            return report(&CliError::InvalidConfig(first.trim_start_matches("error: ").to_string()));
        }
    };
    let config = match RunConfig::from_cli(&cli) {
        Ok(config) => config,
        Err(e) => return report(&e),
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    if let Err(e) = run(&config, &mut out).and_then(|()| out.flush().map_err(CliError::from)) {
        return report(&e);
    }
    ExitCode::SUCCESS
}
