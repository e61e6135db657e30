use std::process::ExitCode;

fn main() -> ExitCode {
    vtt_cli::run(std::env::args_os())
}
