use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use roundlab_cli::{execute, render_records, render_table, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let execution = match execute(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };

    let stream = render_records(&execution.records);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &stream),
        None => std::io::stdout().write_all(stream.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write records: {e}");
        return ExitCode::from(1);
    }
    match &execution.outcomes {
        Some(outcomes) => {
            for o in outcomes {
                eprintln!("{}", o.line());
            }
            let summary: Vec<_> = outcomes.iter().map(|o| o.record()).collect();
            eprint!("{}", render_table(&summary));
        }
        None => eprint!("{}", render_table(&execution.records)),
    }

    if execution.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
