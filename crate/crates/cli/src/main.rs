use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod run;

/// Internal and external tangent spaces of diffeological spaces.
#[derive(Parser, Debug)]
#[command(name = "dtangent", version, about)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Truncation order K for germ computations; K and K+1 are both checked.
    #[arg(long, global = true, default_value_t = 4)]
    order: u32,

    /// Comma-separated slopes for wire spaces, e.g. `1,2,1/2`.
    #[arg(long, global = true)]
    slopes: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Dimension and basis of the internal tangent space.
    TangentInternal {
        space: String,
        #[arg(default_value = "origin")]
        point: String,
    },
    /// Dimension of the space of derivations on the germ algebra.
    TangentExternal {
        space: String,
        #[arg(default_value = "origin")]
        point: String,
    },
    /// The comparison map from internal to external tangent vectors.
    Beta {
        space: String,
        #[arg(default_value = "origin")]
        point: String,
    },
    /// Membership of a candidate `BASE ; FIBRE` in both tangent-bundle diffeologies.
    BundleCheck {
        space: String,
        candidate: String,
        /// Source dimension of the candidate.
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Smoothness of fibrewise addition and scalar multiplication on two candidates.
    Fibrewise {
        space: String,
        f: String,
        g: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Recompute the summary table of tangent-space dimensions.
    Table,
    /// Verify the left-translation trivialization of a group's tangent bundle.
    Trivialize { space: String },
    /// Decide whether the tangent space at a point is fine.
    Fine {
        space: String,
        #[arg(default_value = "origin")]
        point: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = run::emit(&cli, &outcome.output) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            for line in &outcome.diagnostics {
                eprintln!("{line}");
            }
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
