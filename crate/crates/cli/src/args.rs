use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kanon_core::io::GraphFormat;

#[derive(Parser, Debug)]
#[command(name = "kanon", version, about = "Make graphs k-degree-anonymous by inserting few edges")]
pub struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute lower and upper bounds for one or more k.
    Anonymize(AnonymizeArgs),
    /// Write a Barabási–Albert graph.
    Generate(GenerateArgs),
    /// Check that an edge set makes a graph k-anonymous.
    Verify(VerifyArgs),
    /// Brute-force reference answers for tiny instances.
    #[command(hide = true, subcommand)]
    Oracle(OracleCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Metis,
    Edgelist,
}

impl From<Format> for GraphFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Metis => GraphFormat::Metis,
            Format::Edgelist => GraphFormat::EdgeList,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Input graph.
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "metis")]
    pub format: Format,
    /// Index base of edge-list files.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub index_base: u8,
}

#[derive(Args, Debug)]
pub struct AnonymizeArgs {
    #[command(flatten)]
    pub input: GraphArgs,
    /// Single k.
    #[arg(long, conflicts_with = "k_list")]
    pub k: Option<usize>,
    /// Comma-separated k values; defaults to 2,3,4,5,7,10,15,20,30,50,100,150,200.
    #[arg(long, value_delimiter = ',')]
    pub k_list: Option<Vec<usize>>,
    /// Seconds per k; 0 disables the limit.
    #[arg(long, default_value_t = 3600.0)]
    pub time_limit: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Degree-vertex mappings per jump configuration.
    #[arg(long, default_value_t = 100)]
    pub mappings: usize,
    /// Local exchange runs per mapping.
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long, default_value_t = 10)]
    pub max_jump_blocks: usize,
    #[arg(long)]
    pub no_reduction: bool,
    /// Use the plain Erdős–Gallai test on difference sequences.
    #[arg(long)]
    pub no_advanced_eg: bool,
    /// Increments that may be wasted per target (default 4 times the max degree).
    #[arg(long)]
    pub waste_budget: Option<usize>,
    /// Targets enumerated per cost.
    #[arg(long, default_value_t = 10_000)]
    pub enumeration_limit: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutFormat,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write the best insertion set as an edge list. With several k, `.k<k>`
    /// is inserted before the extension.
    #[arg(long)]
    pub emit_edges: Option<PathBuf>,
    /// Write every tested Phase 1 solution as JSON (same naming rule).
    #[arg(long)]
    pub dump_solutions: Option<PathBuf>,
    /// Label for the report; defaults to the file stem.
    #[arg(long)]
    pub graph_id: Option<String>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 3)]
    pub m0: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "metis")]
    pub format: Format,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub index_base: u8,
    /// Output file; stdout if absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: GraphArgs,
    /// Edge list of inserted edges, same index base as the graph.
    pub edges: PathBuf,
    #[arg(long)]
    pub k: usize,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Minimum insertion set by exhaustive search.
    MinInsertion {
        #[command(flatten)]
        input: GraphArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        edge_cap: usize,
    },
    /// Minimum cost of anonymizing a block sequence.
    Kdsa {
        /// Comma-separated block sizes b_0,b_1,...
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<usize>,
        #[arg(long)]
        k: usize,
    },
    /// Whether a degree sequence is graphical.
    Realizable {
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
    },
}
