//! Command-line front end: JSON job descriptions in, line-delimited JSON
//! reports out.

pub mod error;
pub mod render;
pub mod report;
pub mod run;
pub mod spec;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::Parser;

pub use error::{CliError, ErrorObject};
pub use report::Report;
pub use run::{run_batch, run_job, Command, Outcome, Overrides};
pub use spec::JobSpec;

#[derive(Debug, Parser)]
#[command(name = "toricdegen", version, about = "Semi-stable toric degenerations from partitioned lattice polytopes")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Job files; `-` reads standard input. Several files run in parallel.
    #[arg(required = true)]
    pub specs: Vec<String>,
    /// Close the lifted polytope with a cap above the lifting function.
    #[arg(long)]
    pub compact_cap: bool,
    /// Piece on which the lifting function vanishes.
    #[arg(long, value_name = "N")]
    pub anchor: Option<usize>,
    /// Draw random coefficients for the family equations.
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Write the dual graph as DOT.
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Write the partition as SVG (compact planar polytopes only).
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Also lift step by step along the partition hyperplanes.
    #[arg(long)]
    pub multi_base: bool,
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn read_jobs(specs: &[String], stdin: &mut dyn Read) -> Vec<Result<(String, String), CliError>> {
    let mut stdin_used = false;
    specs
        .iter()
        .map(|s| {
            if s == "-" {
                if stdin_used {
                    return Err(CliError::Input("standard input given more than once".into()));
                }
                stdin_used = true;
                let mut text = String::new();
                stdin
                    .read_to_string(&mut text)
                    .map_err(|e| CliError::Io { path: "-".into(), message: e.to_string() })?;
                Ok(("-".into(), text))
            } else {
                std::fs::read_to_string(s)
                    .map(|text| (s.clone(), text))
                    .map_err(|e| CliError::Io { path: s.clone(), message: e.to_string() })
            }
        })
        .collect()
}

fn emit_error(input: Option<&str>, e: &CliError, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let mut obj = e.object();
    obj.input = input.map(str::to_string);
    let _ = writeln!(out, "{}", serde_json::to_string(&obj).expect("error objects serialize"));
    let _ = writeln!(err, "toricdegen: {e}");
    e.exit_code()
}

/// Runs the command line and returns the exit code: 0 success, 1 a
/// mathematical rejection, 2 an input error. The worst job wins in batches.
pub fn execute(args: &Args, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if args.specs.len() > 1 && (args.dot.is_some() || args.svg.is_some()) {
        return emit_error(None, &CliError::Input("--dot and --svg take a single job".into()), out, err);
    }
    let overrides = Overrides {
        compact_cap: args.compact_cap,
        anchor: args.anchor,
        seed: args.seed,
        multi_base: args.multi_base,
        dot: args.dot.is_some(),
        svg: args.svg.is_some(),
    };
    let read = read_jobs(&args.specs, stdin);
    let jobs: Vec<(String, String)> = read.iter().filter_map(|r| r.as_ref().ok().cloned()).collect();
    let mut results = run_batch(args.command, &jobs, &overrides).into_iter();

    let mut code = 0;
    for (r, spec) in read.into_iter().zip(&args.specs) {
        let result = r.and_then(|_| results.next().expect("one result per readable job")).and_then(|o| {
            for (path, contents) in [(&args.dot, &o.dot), (&args.svg, &o.svg)] {
                if let (Some(p), Some(c)) = (path, contents) {
                    write_file(p, c)?;
                }
            }
            Ok((o.report, o.exit_code))
        });
        match result {
            Ok((report, c)) => {
                code = code.max(c);
                let _ = writeln!(out, "{}", serde_json::to_string(&report).expect("reports serialize"));
            }
            Err(e) => code = code.max(emit_error(Some(spec), &e, out, err)),
        }
    }
    code
}
