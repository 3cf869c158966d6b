use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use pseudoeig_cli::report::SolveReport;
use pseudoeig_cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Usage errors are input errors: JSON on stdout, clap's text on stderr.
            let _ = e.print();
            let msg = e.render().to_string();
            let head = msg.split("\n\nUsage").next().unwrap_or_default();
            let message = head.trim_start_matches("error: ").split_whitespace().collect::<Vec<_>>().join(" ");
            emit(&SolveReport::from_error("argument", message).to_json());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let out = run(cli);
    emit(&out.stdout);
    ExitCode::from(out.code as u8)
}

/// Ignores write errors so a closed pipe does not panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", text.trim_end());
}
