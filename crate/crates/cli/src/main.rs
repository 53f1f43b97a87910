use std::io::{stderr, stdout, Write};
use std::process::ExitCode;

use clap::Parser;
use layers_cli::{run, Cli, Streams};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (stdout(), stderr());
    let result = run(
        &cli,
        &mut Streams {
            out: &mut out,
            err: &mut err,
        },
    );
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
