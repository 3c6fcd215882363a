use std::process::ExitCode;

fn main() -> ExitCode {
    ww_density::cli::main()
}
