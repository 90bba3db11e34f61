//! `tradeoff` — exact analysis of parametric regularized minimization.
//!
//! Loads finite candidate tables (or built-in fixtures), builds the concave
//! piecewise-linear value function of `H_alpha = F + sum_j alpha_j G_j`,
//! locates the exceptional weights where minimizers disagree about the
//! regularizer, and runs the related scans: step functions, minimizing
//! sequences, multi-axis slices, polynomial critical points and the penalty
//! sweep. Exact rationals in, exact rationals out.

mod commands;
mod support;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Format, MultiscanArgs, Output};
use support::{CliError, CliResult};
use tradeoff_core::invariance::Policy;
use tradeoff_core::io::{LoadedTable, NumStyle};
use tradeoff_core::multiparam::AlphaGrid;
use tradeoff_core::scalar::{ExactScalar, Scalar};

#[derive(Parser)]
#[command(
    name = "tradeoff",
    version,
    about = "Exact analysis of parametric regularized minimization H_alpha = F + sum_j alpha_j G_j"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Scalar backend (files declare their own; approx downgrades exact input)
    #[arg(long, global = true, value_enum, default_value_t = BackendOpt::Exact)]
    backend: BackendOpt,

    /// Comparison tolerance for the approx backend
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for randomized policies and sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format on stdout (default json, except exceptional: csv)
    #[arg(long, global = true, value_enum)]
    format: Option<FormatOpt>,

    /// Worker threads for grid sweeps
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Print scalars as decimals with this many digits instead of p/q
    #[arg(long, global = true)]
    decimal: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendOpt {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatOpt {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyOpt {
    AdversarialMax,
    AdversarialMin,
    Random,
    Alternating,
}

impl From<PolicyOpt> for Policy {
    fn from(p: PolicyOpt) -> Policy {
        match p {
            PolicyOpt::AdversarialMax => Policy::AdversarialMax,
            PolicyOpt::AdversarialMin => Policy::AdversarialMin,
            PolicyOpt::Random => Policy::Random,
            PolicyOpt::Alternating => Policy::Alternating,
        }
    }
}

/// Table source shared by the analysis commands.
#[derive(Args)]
struct InputOpts {
    /// Table JSON file
    #[arg(long)]
    table: Option<PathBuf>,

    /// Built-in fixture: halfsum | halfsum-g2 | penalty-grid
    #[arg(long)]
    fixture: Option<String>,

    /// Size parameter for the halfsum fixtures
    #[arg(long, default_value_t = 3)]
    n: usize,

    /// Grid side for the penalty fixture
    #[arg(long, default_value_t = 41)]
    side: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build and export the value-function envelope
    Envelope {
        #[command(flatten)]
        input: InputOpts,
        /// Cross-check against direct minimization at this many probe points
        #[arg(long)]
        check_oracle: Option<usize>,
    },
    /// List exceptional weights with their slope pairs (CSV by default)
    Exceptional {
        #[command(flatten)]
        input: InputOpts,
    },
    /// Export the step function alpha -> G_alpha
    Gstep {
        #[command(flatten)]
        input: InputOpts,
    },
    /// Invariance report at given weights
    Analyze {
        #[command(flatten)]
        input: InputOpts,
        /// Weights (exact strings like 3/4; comma-separated or repeated)
        #[arg(long, required = true, value_delimiter = ',')]
        alpha: Vec<String>,
    },
    /// Generate and verify an epsilon-minimizing sequence
    Sequences {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = PolicyOpt::AdversarialMax)]
        policy: PolicyOpt,
        /// Explicit epsilon schedule (comma-separated, strictly decreasing)
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<String>>,
        /// Length of the default schedule 2^-1, 2^-2, ..
        #[arg(long, default_value_t = 20)]
        eps_count: usize,
    },
    /// Slice a multi-regularizer table along one axis and scan every line
    Multiscan {
        #[command(flatten)]
        input: InputOpts,
        /// Axis to scan (1-based)
        #[arg(long)]
        axis: usize,
        /// Per-axis grid start:end:count (repeat per axis, or give one for all)
        #[arg(long = "grid")]
        grids: Vec<String>,
        /// Cell refinements for the measure diagnostic
        #[arg(long, default_value = "10,100", value_delimiter = ',')]
        refine: Vec<usize>,
        /// Concavity spot-check trials (0 disables)
        #[arg(long, default_value_t = 500)]
        concavity_trials: usize,
    },
    /// Certified critical-point scan for polynomial F, G
    Critpoints {
        /// F coefficients, low to high degree (exact strings)
        #[arg(
            long,
            required = true,
            value_delimiter = ',',
            allow_hyphen_values = true
        )]
        f: Vec<String>,
        /// G coefficients, low to high degree
        #[arg(
            long,
            required = true,
            value_delimiter = ',',
            allow_hyphen_values = true
        )]
        g: Vec<String>,
        /// Compact window lo:hi
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        window: String,
        /// Weights to scan (comma-separated exact values)
        #[arg(long, required = true, value_delimiter = ',')]
        alphas: Vec<String>,
        /// Grouping tolerance for equal H values (default 2^-30)
        #[arg(long, default_value = "1/1073741824")]
        equal_h_tol: String,
    },
    /// Built-in penalty-method sweep on the grid problem
    PenaltyDemo {
        /// Grid side (side x side points over [-2, 2]^2)
        #[arg(long, default_value_t = 41)]
        side: usize,
        /// Explicit weights; default is the 50-point grid i/8, i = 1..50
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<String>>,
    },
    /// Emit a built-in table as JSON
    Fixture {
        /// halfsum | halfsum-g2 | penalty-grid
        which: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 41)]
        side: usize,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    match run(&cli) {
        Ok(output) => {
            if !output.stderr.is_empty() {
                eprint!("{}", output.stderr);
            }
            print!("{}", output.stdout);
            std::io::stdout().flush().ok();
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

/// Dispatches a table-shaped command across the two backends.
macro_rules! with_backend {
    ($loaded:expr, |$t:ident| $body:expr) => {
        match $loaded {
            LoadedTable::Exact($t) => $body,
            LoadedTable::Approx($t) => $body,
        }
    };
}

fn run(cli: &Cli) -> CliResult<Output> {
    let style = match cli.decimal {
        Some(digits) => NumStyle::Decimal(digits),
        None => NumStyle::Canonical,
    };
    let pick_format = |default: Format| match cli.format {
        Some(FormatOpt::Json) => Format::Json,
        Some(FormatOpt::Csv) => Format::Csv,
        None => default,
    };
    let format = pick_format(Format::Json);
    let want_approx = matches!(cli.backend, BackendOpt::Approx);

    let load = |input: &InputOpts| -> CliResult<LoadedTable> {
        support::load_table(
            input.table.as_deref(),
            input.fixture.as_deref(),
            input.n,
            input.side,
            want_approx,
            cli.tol,
        )
    };

    match &cli.command {
        Cmd::Envelope {
            input,
            check_oracle,
        } => {
            let loaded = load(input)?;
            with_backend!(loaded, |t| commands::cmd_envelope(
                &t,
                *check_oracle,
                style,
                format
            ))
        }
        Cmd::Exceptional { input } => {
            let loaded = load(input)?;
            // exceptional listings default to the CSV schema
            let fmt = pick_format(Format::Csv);
            with_backend!(loaded, |t| commands::cmd_exceptional(&t, style, fmt))
        }
        Cmd::Gstep { input } => {
            let loaded = load(input)?;
            with_backend!(loaded, |t| commands::cmd_gstep(&t, style, format))
        }
        Cmd::Analyze { input, alpha } => {
            let loaded = load(input)?;
            with_backend!(loaded, |t| {
                let alphas = support::parse_scalars(alpha, cli.tol)?;
                commands::cmd_analyze(&t, &alphas, style, format)
            })
        }
        Cmd::Sequences {
            input,
            alpha,
            policy,
            eps,
            eps_count,
        } => {
            let loaded = load(input)?;
            with_backend!(loaded, |t| {
                let alpha = support::parse_scalar(alpha, cli.tol)?;
                let schedule = match eps {
                    Some(list) => support::parse_scalars(list, cli.tol)?,
                    None => default_schedule(*eps_count),
                };
                commands::cmd_sequences(
                    &t,
                    &alpha,
                    &schedule,
                    Policy::from(*policy),
                    cli.seed,
                    style,
                    format,
                )
            })
        }
        Cmd::Multiscan {
            input,
            axis,
            grids,
            refine,
            concavity_trials,
        } => {
            let loaded = load(input)?;
            with_backend!(loaded, |t| {
                if *axis == 0 || *axis > t.m() {
                    return Err(CliError::usage(format!(
                        "--axis is 1-based and must be in 1..={}",
                        t.m()
                    )));
                }
                let axes = resolve_grids(grids, t.m(), cli.tol)?;
                let args = MultiscanArgs {
                    axis0: axis - 1,
                    grid: AlphaGrid::new(axes)?,
                    refinements: refine.clone(),
                    concavity_trials: *concavity_trials,
                    seed: cli.seed,
                };
                commands::cmd_multiscan(&t, &args, style, format)
            })
        }
        Cmd::Critpoints {
            f,
            g,
            window,
            alphas,
            equal_h_tol,
        } => {
            if want_approx {
                return Err(CliError::usage("critpoints requires the exact backend"));
            }
            let window = support::parse_window::<ExactScalar>(window, 0.0)?;
            let alphas = support::parse_scalars::<ExactScalar>(alphas, 0.0)?;
            let tol = support::parse_scalar::<ExactScalar>(equal_h_tol, 0.0)?;
            commands::cmd_critpoints(f, g, window, &alphas, &tol, style, format)
        }
        Cmd::PenaltyDemo { side, alphas } => {
            let table = tradeoff_core::fixtures::penalty_grid(*side);
            let alphas: Vec<ExactScalar> = match alphas {
                Some(list) => support::parse_scalars(list, 0.0)?,
                None => (1..=50).map(|i| ExactScalar::from_ratio(i, 8)).collect(),
            };
            if want_approx {
                let approx = support::exact_to_approx(&table, cli.tol);
                let alphas: Vec<_> = alphas
                    .iter()
                    .map(|a| tradeoff_core::ApproxScalar::new(a.to_f64(), cli.tol))
                    .collect();
                commands::cmd_penalty_demo(&approx, &alphas, style, format)
            } else {
                commands::cmd_penalty_demo(&table, &alphas, style, format)
            }
        }
        Cmd::Fixture {
            which,
            n,
            side,
            out,
        } => {
            let table = support::fixture_table(which, *n, *side)?;
            let text = format!("{:#}\n", tradeoff_core::io::table_to_json(&table));
            match out {
                Some(path) => {
                    std::fs::write(path, &text)?;
                    Ok(Output {
                        stdout: String::new(),
                        stderr: format!("wrote {}\n", path.display()),
                    })
                }
                None => Ok(Output {
                    stdout: text,
                    stderr: String::new(),
                }),
            }
        }
    }
}

fn default_schedule<S: Scalar>(count: usize) -> Vec<S> {
    let count = count.max(1);
    let mut eps = S::one();
    let half = S::from_ratio(1, 2);
    (0..count)
        .map(|_| {
            eps = eps.clone() * half.clone();
            eps.clone()
        })
        .collect()
}

fn resolve_grids<S: Scalar>(specs: &[String], m: usize, tol: f64) -> CliResult<Vec<Vec<S>>> {
    let default_spec = "0:1:11".to_string();
    let specs: Vec<&String> = match specs.len() {
        0 => vec![&default_spec; m],
        1 => vec![&specs[0]; m],
        k if k == m => specs.iter().collect(),
        k => {
            return Err(CliError::usage(format!(
                "got {k} --grid specs for {m} axes (give 1 or {m})"
            )))
        }
    };
    specs
        .into_iter()
        .map(|s| support::parse_grid_spec(s, tol))
        .collect()
}
