use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(rearrange_lab::run(std::env::args_os()) as u8)
}
