use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cdcurv_cli::args::Cli;
use cdcurv_cli::{run, CliError, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.command.common().out.clone();
    match run(cli.command) {
        Ok(output) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &output.body)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
                None if output.summary.is_none() => {
                    std::io::stdout().write_all(output.body.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
                }
                None => Ok(()),
            };
            if let Err(e) = written {
                eprintln!("cdcurv: {e}");
                return ExitCode::from(e.exit_code());
            }
            if let Some(summary) = &output.summary {
                print!("{summary}");
            }
            ExitCode::from(output.exit)
        }
        Err(e) => {
            eprintln!("cdcurv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
