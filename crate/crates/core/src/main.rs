use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdin = std::io::stdin();
    let outcome = su2_factor::cli::run(std::env::args_os(), &mut stdin.lock());
    // nothing sensible to do if the pipes are closed
    let _ = std::io::stdout().write_all(&outcome.stdout);
    let _ = std::io::stderr().write_all(&outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
