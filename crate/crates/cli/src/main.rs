use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(varnorm::run(std::env::args_os()) as u8)
}
