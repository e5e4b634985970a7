use std::process::ExitCode;

fn main() -> ExitCode {
    compress_interplay::main_with_args(std::env::args_os())
}
