mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "loja", version, about = "Empirical Lojasiewicz inequalities, set distances and medial axes")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Number of sample points (command-specific default).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A multifunction read from JSON lines or built from branch functions.
#[derive(Args, Clone)]
pub struct MfSource {
    #[arg(long, conflicts_with = "branches")]
    pub mf: Option<PathBuf>,
    /// Comma-separated function files or inline sources; `F(x)` is the set of
    /// values of the branches defined at `x`.
    #[arg(long, value_delimiter = ',')]
    pub branches: Vec<String>,
    /// Box sampled for `--branches`.
    #[arg(allow_hyphen_values = true, long = "grid")]
    pub grid: Option<String>,
}

/// A closed set given by its sample points.
#[derive(Args, Clone)]
pub struct XSource {
    /// Points of `X`, one per line, comma separated.
    #[arg(long = "X")]
    pub x: PathBuf,
    /// Spacing of the points along `X` when they sample a continuum.
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Tolerance for closest points.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse a function and print its canonical form.
    Parse {
        #[arg(allow_hyphen_values = true, value_name = "FN")]
        source: String,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Evaluate a function at a point.
    Eval {
        #[arg(allow_hyphen_values = true, value_name = "FN")]
        source: String,
        #[arg(allow_hyphen_values = true, long)]
        at: String,
    },
    /// Estimate the generalized zero set of a function.
    Zeroset {
        #[arg(allow_hyphen_values = true, long = "fn")]
        source: String,
        #[arg(allow_hyphen_values = true, long)]
        domain: String,
        #[arg(long, default_value_t = loja::zeroset::DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = loja::zeroset::DEFAULT_DELTA)]
        delta: f64,
    },
    /// Fit |f| >= C |g|^alpha, or |f|^N <= C |g| with --reverse.
    Fit {
        #[arg(allow_hyphen_values = true, long)]
        f: String,
        #[arg(allow_hyphen_values = true, long)]
        g: String,
        #[arg(allow_hyphen_values = true, long)]
        domain: String,
        #[arg(long)]
        reverse: bool,
        #[arg(long)]
        check_star: bool,
        #[arg(long)]
        check_bounded: bool,
    },
    /// Semicontinuity flags of a multifunction at a point.
    Classify {
        #[command(flatten)]
        source: MfSource,
        #[arg(allow_hyphen_values = true, long)]
        at: String,
        #[arg(long, default_value_t = loja::multifun::DEFAULT_TOL_LIM)]
        tol_lim: f64,
    },
    /// One of the four preimages of F(a).
    Preimage {
        #[command(flatten)]
        source: MfSource,
        #[arg(allow_hyphen_values = true, long)]
        at: String,
        #[arg(long, default_value = "strong")]
        kind: String,
    },
    /// Fit dist(F(x), F(a)) >= C d(x, P)^alpha on a box.
    Mfloja {
        #[command(flatten)]
        source: MfSource,
        #[arg(allow_hyphen_values = true, long)]
        at: String,
        #[arg(long, default_value = "upper")]
        kind: String,
        #[arg(long, default_value = "hausdorff")]
        metric: String,
        #[arg(allow_hyphen_values = true, long)]
        domain: String,
    },
    /// Hausdorff distance between two point files.
    Hausdorff { a: PathBuf, b: PathBuf },
    /// Kuratowski distance between two point files.
    Kuratowski { a: PathBuf, b: PathBuf },
    /// Sampled medial axis of a closed set.
    Medial {
        #[command(flatten)]
        x: XSource,
        #[arg(allow_hyphen_values = true, long)]
        domain: String,
    },
    /// Sampled region N(a) of the points whose closest points include a.
    Nregion {
        #[command(flatten)]
        x: XSource,
        #[arg(allow_hyphen_values = true, long)]
        at: String,
        #[arg(allow_hyphen_values = true, long)]
        domain: String,
    },
    /// Lojasiewicz fit for the closest-point multifunction m or its dual N.
    Medloja {
        #[command(flatten)]
        x: XSource,
        #[arg(allow_hyphen_values = true, long)]
        at: String,
        #[arg(long, default_value = "m")]
        kind: String,
        #[arg(long)]
        metric: Option<String>,
        /// The box K.
        #[arg(allow_hyphen_values = true, long)]
        domain: String,
        /// Box on which N regions are sampled.
        #[arg(allow_hyphen_values = true, long)]
        window: Option<String>,
    },
    /// Run the regression matrix and fixture reports.
    PaperSuite {
        #[arg(long)]
        only: Option<String>,
        /// Fixture parameter, e.g. M=12.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Emit plot data (envelope, axis or cloud) as CSV instead of the report.
        #[arg(long)]
        plot: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let argv: Vec<String> = std::iter::once("loja".to_string())
        .chain(std::env::args().skip(1))
        .collect();
    match commands::run(&cli, &argv).and_then(|out| out.emit(&cli.common).map(|()| out.pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
