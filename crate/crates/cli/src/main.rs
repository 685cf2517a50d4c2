use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use borel_cli::{run, Command, JobConfig, OutputFormat};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Borel functional calculus for normal matrices and commuting tuples.
#[derive(Parser, Debug)]
#[command(name = "calc", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate Phi(f) for a normal matrix, a commuting tuple or a saved calculus.
    Apply(Common),
    /// Spectrum, point and approximate point spectrum and eigenprojections of Phi(f).
    Spectrum(Common),
    /// Joint calculus of commuting normal matrices, written as calculus JSON.
    Joint(Common),
    /// Strong-commutation battery for two normal matrices.
    Commute(Common),
    /// Bounded transform (T, S, Z) of one normal matrix.
    Transform(Common),
    /// Check the calculus and PVM axioms on a seeded function set.
    Verify(Common),
    /// Multiplication-operator representation U Phi(f) U* = M_f.
    Represent(Common),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Common {
    /// Input JSON file (matrix or calculus); repeat for tuples.
    #[arg(long = "matrix", short = 'm', value_name = "FILE", required = true)]
    matrices: Vec<PathBuf>,
    /// Function expression, e.g. "z^2" or "ind(closedball(0, 1))".
    #[arg(long, short = 'e')]
    expr: Option<String>,
    /// Override every check threshold.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for sampled functions and the commutation battery.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Chebyshev degree (apply on a Hermitian matrix).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', value_name = "FILE")]
    out: Option<PathBuf>,
}

fn job(cli: Cli) -> JobConfig {
    let (command, c) = match cli.command {
        Cmd::Apply(c) => (Command::Apply, c),
        Cmd::Spectrum(c) => (Command::Spectrum, c),
        Cmd::Joint(c) => (Command::Joint, c),
        Cmd::Commute(c) => (Command::Commute, c),
        Cmd::Transform(c) => (Command::Transform, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Represent(c) => (Command::Represent, c),
    };
    JobConfig {
        command,
        inputs: c.matrices,
        expr: c.expr,
        tol: c.tol,
        seed: c.seed,
        degree: c.degree,
        format: match c.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
        output: c.out,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let job = job(cli);
    let outcome = run(&job);
    if let Some(report) = &outcome.report {
        let written = match &job.output {
            Some(path) => std::fs::write(path, report).map_err(|e| format!("{}: {e}", path.display())),
            None => std::io::stdout().write_all(report.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Some(d) = &outcome.diagnostic {
        eprintln!("{d}");
    }
    ExitCode::from(outcome.code as u8)
}
