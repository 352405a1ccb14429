//! Batch scoring, estimation and simulation commands behind the
//! `properscore` binary.

pub mod args;
pub mod error;
pub mod estimate;
pub mod io;
pub mod score;
pub mod simulate;

use args::{Cli, Command, ScoreCommand, SimulateCommand};
use error::{CliError, CliResult};

fn dispatch(cli: &Cli) -> CliResult<()> {
    let quiet = cli.quiet;
    match &cli.command {
        Command::Score(cmd) => {
            let (text, out) = match cmd {
                ScoreCommand::Parametric(a) => (score::parametric(a, quiet)?, &a.output),
                ScoreCommand::Sample(a) => (score::sample(a, quiet)?, &a.output),
                ScoreCommand::Mv(a) => (score::multivariate(a, quiet)?, &a.output),
            };
            io::emit(out.out.as_deref(), &text)
        }
        Command::Estimate(a) => {
            let (text, converged) = estimate::run(a)?;
            io::emit(a.out.as_deref(), &text)?;
            if !converged && !a.allow_nonconverged {
                return Err(CliError::NonConvergence(
                    "estimation did not converge (use --allow-nonconverged to accept the last iterate)".into(),
                ));
            }
            Ok(())
        }
        Command::Simulate(SimulateCommand::Convergence(a)) => {
            let text = simulate::convergence(a)?;
            io::emit(a.output.out.as_deref(), &text)
        }
        Command::Simulate(SimulateCommand::Estimation(a)) => {
            let (text, summary) = simulate::estimation(a)?;
            io::emit(a.output.out.as_deref(), &text)?;
            if !quiet {
                eprint!("{summary}");
            }
            Ok(())
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
