use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgame_cli::{dense_cap_from_env, run, Command, EngineChoice, ExitStatus, Format, RunRequest};

/// Quantum truckers game simulator.
#[derive(Parser)]
#[command(name = "qgame", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Run one game and report the outcome distribution.
    Simulate {
        #[arg(long)]
        n: usize,
        /// Phase parameter; any integer, reduced mod n.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        p: i64,
        #[arg(long, value_enum, default_value_t = EngineChoice::Dense)]
        engine: EngineChoice,
        /// List every outcome even above 10^5 of them.
        #[arg(long)]
        full: bool,
        /// Add the unpruned probability to every listed outcome.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Worst/best probabilities for every phase p in 0..n (closed form).
    Sweep {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo baseline for uniformly random road choices.
    Classical {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run unitarity, normalization, selection-rule and oracle checks.
    Verify {
        #[arg(long = "n-max")]
        n_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Classical versus quantum worst/best probabilities for n = 2..=n-max.
    Compare {
        #[arg(long = "n-max")]
        n_max: usize,
        #[command(flatten)]
        out: Output,
    },
}

fn request(cli: Cli) -> RunRequest {
    match cli.command {
        Sub::Simulate {
            n,
            p,
            engine,
            full,
            raw,
            out,
        } => RunRequest {
            p,
            engine,
            full,
            raw,
            format: out.format,
            output_path: out.output,
            ..RunRequest::new(Command::Simulate, n)
        },
        Sub::Sweep { n, out } => with_output(RunRequest::new(Command::Sweep, n), out),
        Sub::Classical {
            n,
            trials,
            seed,
            out,
        } => with_output(
            RunRequest {
                trials,
                seed,
                ..RunRequest::new(Command::Classical, n)
            },
            out,
        ),
        Sub::Verify { n_max, out } => with_output(RunRequest::new(Command::Verify, n_max), out),
        Sub::Compare { n_max, out } => with_output(RunRequest::new(Command::Compare, n_max), out),
    }
}

fn with_output(mut req: RunRequest, out: Output) -> RunRequest {
    req.format = out.format;
    req.output_path = out.output;
    req
}

fn exit(status: ExitStatus) -> ExitCode {
    ExitCode::from(status as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit(ExitStatus::Usage)
            } else {
                exit(ExitStatus::Success)
            };
        }
    };
    let mut req = request(cli);
    req.dense_cap = match dense_cap_from_env() {
        Ok(cap) => cap,
        Err(msg) => {
            eprintln!("error: {msg}");
            return exit(ExitStatus::Usage);
        }
    };

    let out = run(&req);
    if !out.body.is_empty() {
        let written = match &req.output_path {
            Some(path) => std::fs::write(path, &out.body),
            None => std::io::stdout().lock().write_all(out.body.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write report: {e}");
            return exit(ExitStatus::Usage);
        }
    }
    if let Some(msg) = &out.message {
        eprintln!("error: {msg}");
    }
    exit(out.status)
}
