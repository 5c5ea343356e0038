use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = gptw::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(out.as_bytes());
    ExitCode::from(code)
}
