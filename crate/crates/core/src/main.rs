use std::process::ExitCode;

fn main() -> ExitCode {
    efpm::cli::main_with_args(std::env::args_os())
}
