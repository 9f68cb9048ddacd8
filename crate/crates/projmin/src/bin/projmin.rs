use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut stdout = io::stdout().lock();
    ExitCode::from(projmin::cli::run(&args, &mut stdout) as u8)
}
