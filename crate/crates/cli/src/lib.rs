//! Command-line front end for `derange-core`. Every command renders a
//! deterministic JSON or CSV report; see [`execute`].

pub mod args;
pub mod count;
pub mod decompose;
pub mod experiment;
pub mod report;
pub mod table;

pub use args::{Cli, Command, Format};
pub use report::{CliError, Report, Status};

/// Runs one parsed command line. `Err` means a usage or file problem (exit
/// 2); a report with failures exits 1.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Count(a) => count::run(a, cli.seed, cli.format),
        Command::Table(a) => table::run(a, cli.seed, cli.format),
        Command::Experiment(c) => experiment::run(c, cli.seed, cli.format),
        Command::Decompose(c) => decompose::run(c, cli.seed, cli.format),
    }
}
