use std::process::ExitCode;

fn main() -> ExitCode {
    omin::cli::run(std::env::args_os())
}
