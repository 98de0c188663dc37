use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orc_core::curvature::Alpha;

#[derive(Debug, Parser)]
#[command(
    name = "orc",
    version,
    about = "Ollivier-Ricci curvature of graph edges by exact optimal transport"
)]
pub struct Cli {
    /// Worker threads (defaults to all available cores).
    #[arg(long, global = true, env = "ORC_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curvature of every edge of a graph, as CSV.
    Curvature(CurvatureArgs),
    /// Write a graph from one of the built-in families.
    #[command(subcommand)]
    Generate(Generate),
    /// Threshold on intercommunity edges that forces nonpositive curvature.
    Bound(BoundArgs),
    /// Solver-independent curvature bound for intercommunity edges.
    Witness(WitnessArgs),
    /// Monte-Carlo experiments on random two-community graphs.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Run the fast built-in checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Graph file; standard input is read when absent.
    #[arg(long, conflicts_with = "stdin")]
    pub graph: Option<PathBuf>,
    /// Read the graph from standard input.
    #[arg(long)]
    pub stdin: bool,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Laziness as an exact fraction `p/q`.
    #[arg(long, default_value = "1/2")]
    pub alpha: Alpha,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Two complete blocks joined by one bridge.
    Dumbbell {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Two copies of K_n joined by n - 1 matching edges.
    ZeroConfig {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// K_n x K_2.
    Prism {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// K_m and K_n joined by k uniformly random edges.
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// K_n as a single community.
    Complete {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Oriented edge `x,y`; every intercommunity edge when absent.
    #[arg(long, value_parser = parse_edge)]
    pub edge: Option<(usize, usize)>,
    #[arg(long, default_value = "1/2")]
    pub alpha: Alpha,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value = "1/2")]
    pub alpha: Alpha,
    #[arg(long, value_enum, default_value = "float")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Fill the `ms` column with wall time per trial.
    #[arg(long)]
    pub timing: bool,
    /// Also write an SVG rendering.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Per-trial proportions for several k at one community size.
    Distribution {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "128,256,384,512")]
        k: Vec<usize>,
        #[command(flatten)]
        common: ExperimentArgs,
    },
    /// Mean and standard deviation over a grid of n and k = mult * n.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        mult: Vec<usize>,
        #[command(flatten)]
        common: ExperimentArgs,
    },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}
