use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use readset_dist::{Method, Preset};

/// Estimate Levenshtein distances between sequences from their read sets,
/// build trees from the estimates and score them against references.
#[derive(Debug, Parser)]
#[command(name = "readset-dist", version, about)]
pub struct Cli {
    /// More log output (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    /// Only log errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a read set from every sequence of a FASTA file.
    Simulate(SimulateArgs),
    /// Pairwise read-set distance matrix (PHYLIP).
    Dist(DistArgs),
    /// Build a tree (Newick) from a PHYLIP matrix.
    Cluster(ClusterArgs),
    /// Compare two matrices (Pearson) or two trees (Fowlkes-Mallows).
    Eval(EvalArgs),
    /// simulate -> dist -> cluster -> eval against exact reference distances.
    Pipeline(PipelineArgs),
    /// Generate a family of related random sequences (FASTA) for experiments.
    Family(FamilyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    /// Sequencing coverage α.
    #[arg(long)]
    pub coverage: f64,

    /// Read length l.
    #[arg(long)]
    pub read_length: usize,

    /// Complement each read with probability 1/2.
    #[arg(long)]
    pub strand_noise: bool,

    /// Reverse each read with probability 1/2.
    #[arg(long)]
    pub orientation_noise: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Sequences to sample from (FASTA).
    pub input: PathBuf,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Replace N by A instead of rejecting it.
    #[arg(long)]
    pub replace_n: bool,

    /// Directory receiving one <id>.reads.fa per sequence.
    #[arg(short = 'o', long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// Estimator selection. A preset fixes every knob; individual flags override it.
#[derive(Debug, Clone, Args)]
pub struct MatchArgs {
    /// Estimator rung.
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,

    /// Baseline max(|R_A|, |R_B|) instead of a Monge-Elkan estimate.
    #[arg(long)]
    pub baseline_maxsize: bool,

    /// Match reads against their complements too.
    #[arg(long)]
    pub strand_unknown: bool,

    /// Match reads against their reversals too.
    #[arg(long)]
    pub orientation_unknown: bool,

    /// Scale by max(|R_A|, |R_B|).
    #[arg(long, overrides_with = "no_scaling")]
    pub scaling: bool,

    #[arg(long)]
    pub no_scaling: bool,

    /// Grace margin t for leading/trailing gaps (default: derived from coverage and read length).
    #[arg(long, conflicts_with = "no_margin")]
    pub margin_t: Option<f64>,

    /// Plain Levenshtein between reads.
    #[arg(long)]
    pub no_margin: bool,

    /// Missing-read threshold θ' in (0, 1).
    #[arg(long, conflicts_with = "no_threshold")]
    pub threshold: Option<f64>,

    #[arg(long)]
    pub no_threshold: bool,

    /// q-gram length of the candidate filter.
    #[arg(long)]
    pub q: Option<usize>,

    /// Candidates per read variant kept by the q-gram filter.
    #[arg(long)]
    pub candidates: Option<usize>,

    /// Stop scanning candidates once the q-gram lower bound exceeds the best match.
    #[arg(long)]
    pub exact_pruning: bool,

    /// Exhaustive best-match search.
    #[arg(long, conflicts_with_all = ["q", "candidates", "exact_pruning"])]
    pub no_embedding: bool,

    /// Down-sample every read set to this coverage first.
    #[arg(long, conflicts_with = "no_sampling")]
    pub sample_coverage: Option<f64>,

    #[arg(long)]
    pub no_sampling: bool,

    /// Seed for down-sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    /// Read-set files (FASTA or one read per line); at least two.
    #[arg(required = true, num_args = 2..)]
    pub inputs: Vec<PathBuf>,

    #[command(flatten)]
    pub matching: MatchArgs,

    /// Coverage of every read set (wins over #coverage= lines).
    #[arg(long)]
    pub coverage: Option<f64>,

    /// Read length of every read set (wins over #readlen= lines).
    #[arg(long)]
    pub read_length: Option<usize>,

    #[command(flatten)]
    pub threads: ThreadArgs,

    /// Replace N by A instead of skipping the read.
    #[arg(long)]
    pub replace_n: bool,

    /// Output PHYLIP file (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ThreadArgs {
    /// Worker threads (default: available cores).
    #[arg(long, env = "READSET_DIST_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    /// PHYLIP distance matrix.
    pub matrix: PathBuf,

    #[arg(long, default_value = "upgma", value_parser = parse_method)]
    pub method: Method,

    /// Output Newick file (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Pearson correlation of two PHYLIP matrices.
    Pearson,
    /// Fowlkes-Mallows B_k table of two Newick trees.
    Fm,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    pub first: PathBuf,
    pub second: PathBuf,

    #[arg(long, value_enum)]
    pub metric: Metric,

    /// Output report (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Sequences (FASTA); at least three for a meaningful report.
    pub input: PathBuf,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    #[command(flatten)]
    pub matching: MatchArgs,

    #[arg(long, default_value = "upgma", value_parser = parse_method)]
    pub method: Method,

    #[command(flatten)]
    pub threads: ThreadArgs,

    #[arg(long)]
    pub replace_n: bool,

    /// Directory receiving reads, matrices, trees and report.txt.
    #[arg(short = 'o', long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Ancestor length.
    #[arg(long, default_value_t = 3000)]
    pub length: usize,

    /// Divergence of each star member from the ancestor (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.05,0.1,0.15,0.2")]
    pub star_rates: Vec<f64>,

    /// Divergence along each edge of the chain (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "0.03,0.03,0.03,0.03,0.03")]
    pub chain_rates: Vec<f64>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output FASTA (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Also write the exact pairwise Levenshtein matrix (PHYLIP) here.
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse()
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}
