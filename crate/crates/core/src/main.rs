use std::io::Write;

fn main() {
    let outcome = nijalg::cli::run_command(std::env::args());
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    let _ = out.write_all(outcome.stdout.as_bytes());
    let _ = err.write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.exit_code);
}
