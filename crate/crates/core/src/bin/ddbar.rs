use std::io;
use std::path::Path;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = ddbar::cli::run(
        std::env::args_os(),
        Path::new("."),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
