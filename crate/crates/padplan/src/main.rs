use std::process::ExitCode;

fn main() -> ExitCode {
    padplan::cli::run()
}
