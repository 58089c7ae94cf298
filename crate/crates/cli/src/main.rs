use std::process::ExitCode;

fn main() -> ExitCode {
    ecoepi_hpm_cli::run(std::env::args().skip(1))
}
