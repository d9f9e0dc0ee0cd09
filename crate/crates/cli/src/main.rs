use std::process::ExitCode;

fn main() -> ExitCode {
    qser_cli::run(std::env::args_os())
}
