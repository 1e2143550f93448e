use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = crystalcalc::cli::run(std::env::args_os());
    let written = match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.report),
        None => std::io::stdout().write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("crystalcalc: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code as u8)
}
