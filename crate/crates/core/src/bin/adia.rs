use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(adia_core::cli::run(std::env::args_os()))
}
