use std::process::ExitCode;

fn main() -> ExitCode {
    popmatch::cli::main()
}
