mod cli;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Verify { m, t, order, format } => commands::verify(m, &t, order, format),
        Command::Scan {
            max_m,
            max_n,
            order,
            jobs,
            format,
        } => commands::scan(max_m, max_n, order, jobs, format),
        Command::Lemmas { which, max, format } => commands::lemmas(which, max, format),
        Command::Numeric {
            m,
            t,
            radius,
            grid,
            seed,
            out,
            format,
        } => commands::numeric(m, &t, radius, grid, seed, out.as_deref(), format),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
