use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use collapse_entanglement::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &rendered.output {
        Some(path) => std::fs::write(path, rendered.text.as_bytes()),
        None => std::io::stdout().lock().write_all(rendered.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if rendered.code != 0 {
        eprintln!("error: no sweep point succeeded");
    }
    ExitCode::from(rendered.code as u8)
}
