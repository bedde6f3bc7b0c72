use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let r = bialg::cli::run(std::env::args());
    print!("{}", r.stdout);
    eprint!("{}", r.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(r.code as u8)
}
