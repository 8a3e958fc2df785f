use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pstmsc_cli::run(std::env::args_os()))
}
