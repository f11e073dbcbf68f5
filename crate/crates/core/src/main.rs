use std::process::ExitCode;

fn main() -> ExitCode {
    rankare::cli::main_with_args(std::env::args().collect())
}
