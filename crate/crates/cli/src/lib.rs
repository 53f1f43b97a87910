//! Command-line front end: peel grids and point files, write and check
//! certificates, draw planar peeling steps and fit growth exponents.

pub mod args;
pub mod commands;
pub mod error;
pub mod growth;
pub mod io;
pub mod render;

pub use args::Cli;
pub use commands::Streams;
pub use error::CliError;

use args::Command;

/// Runs one parsed command line.
pub fn run(cli: &Cli, io: &mut Streams) -> Result<(), CliError> {
    let go = |io: &mut Streams| match &cli.command {
        Command::Peel(a) => commands::peel(a, io),
        Command::Certify(a) => commands::certify(a, io),
        Command::Verify(a) => commands::verify(a, io),
        Command::Render(a) => commands::render(a, io),
        Command::Growth(a) => commands::growth_cmd(a, io),
    };
    match cli.threads {
        Some(0) => Err(CliError::usage("--threads must be positive")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?
            .install(|| go(io)),
        None => go(io),
    }
}
