use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Style {
    /// y_ij = d^j x_i written as y{i}_{j}
    Y,
    /// d{j}x{i}
    D,
}

#[derive(Parser, Debug)]
#[command(
    name = "hkdiff",
    version,
    about = "Higher Kaehler differentials and the jet representation of truncated power-series automorphisms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Number of coordinates x1..xm
    #[arg(long, global = true)]
    pub m: Option<usize>,

    /// Truncation / differential order
    #[arg(long = "N", global = true)]
    pub order: Option<usize>,

    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    /// Read the map from a JSON record instead of inline expressions
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Jet variable naming
    #[arg(long, global = true, value_enum)]
    pub style: Option<Style>,

    /// Echo the run configuration to stderr
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print d^1 f .. d^N f
    Diff {
        /// Polynomial in x1..xm (x when m = 1)
        #[arg(allow_hyphen_values = true)]
        f: Option<String>,
        /// Use a generic f with symbolic partial derivatives at a point
        #[arg(long)]
        generic: bool,
    },
    /// Image of a truncated series automorphism as a polynomial map of jet space
    Alpha {
        /// One expression per component (put components starting with '-' after `--`)
        components: Vec<String>,
        /// Compute the image by two independent routes and compare
        #[arg(long)]
        verify: bool,
    },
    /// Compose two maps: phi(psi(x))
    Compose {
        #[arg(long, num_args = 1..)]
        phi: Vec<String>,
        #[arg(long, num_args = 1..)]
        psi: Vec<String>,
        /// JSON record for psi
        #[arg(long)]
        psi_input: Option<PathBuf>,
        /// Treat the maps as polynomial endomorphisms instead of truncated series
        #[arg(long)]
        poly: bool,
    },
    /// Invert a truncated series map, or a block triangular polynomial map with --poly
    Invert {
        components: Vec<String>,
        #[arg(long)]
        poly: bool,
        /// Block size for --poly (default: try 1, then the whole map)
        #[arg(long)]
        block: Option<usize>,
    },
    /// Report structural properties of a polynomial map
    Classify {
        components: Vec<String>,
        #[arg(long)]
        block: Option<usize>,
    },
    /// Lift a polynomial automorphism of x-space to x- and jet-space
    Embed {
        components: Vec<String>,
        /// Skip the invertibility check and lift any endomorphism
        #[arg(long)]
        unchecked: bool,
    },
    /// Run the property harness over the (m, N) grid
    Verify {
        /// Test hook: perturb alpha so that the harness must fail
        #[arg(long, hide = true)]
        corrupt_alpha: bool,
    },
    /// Recompute the worked examples m=1, N=3 and m=2, N=2 symbolically
    Examples,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.verbose > 0 {
        eprintln!(
            "hkdiff: m={:?} N={:?} seed={} trials={} format={:?}",
            cli.m, cli.order, cli.seed, cli.trials, cli.format
        );
    }
    let result = commands::run(&cli);
    match result {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            if let Err(e) = emit(&cli, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
