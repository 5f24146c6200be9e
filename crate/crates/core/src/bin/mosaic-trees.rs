use std::process::ExitCode;

fn main() -> ExitCode {
    mosaic_trees::cli::main_with(std::env::args_os())
}
