use std::process::ExitCode;

fn main() -> ExitCode {
    singular_knots::cli::run()
}
