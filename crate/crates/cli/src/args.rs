use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wfdecide::complex::DEFAULT_MAX_VERTICES;
use wfdecide::solver::DEFAULT_MAX_NODES;
use wfdecide::task::ValidationMode;

#[derive(Debug, Parser)]
#[command(
    name = "wfdecide",
    version,
    about = "Decide wait-free solvability of colorless tasks"
)]
pub struct Cli {
    /// Largest subdivision the search may build.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,

    /// Search node budget per constraint problem.
    #[arg(long, global = true, env = "WFDECIDE_MAX_NODES", default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: u64,

    /// Worker threads for the closure step (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TaskArgs {
    /// Task file, or a built-in such as `builtin:hexagon`, `builtin:sa:k=3`,
    /// `builtin:eps:N=8`, `builtin:cover:m=3,k=2`.
    #[arg(long)]
    pub task: String,

    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    Repair,
    Lenient,
}

impl From<Mode> for ValidationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => ValidationMode::Strict,
            Mode::Repair => ValidationMode::Repair,
            Mode::Lenient => ValidationMode::Lenient,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Added,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Stubborn,
    Honest,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a task file and report warnings.
    Validate(TaskArgs),

    /// Apply the closure operator.
    Closure {
        #[command(flatten)]
        task: TaskArgs,
        /// Number of closure steps (default 1).
        #[arg(long, conflicts_with = "fixed_point")]
        steps: Option<usize>,
        /// Iterate until nothing is added.
        #[arg(long)]
        fixed_point: bool,
        /// Include the added simplices and their local witnesses.
        #[arg(long, value_enum)]
        report: Option<Report>,
    },

    /// Decide solvability and emit a witness or an impossibility proof.
    Decide {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long)]
        n: usize,
        /// Check that one round fewer does not suffice.
        #[arg(long)]
        confirm_minimal: bool,
        /// Re-verify a previously emitted proof instead of deciding.
        #[arg(long, value_name = "FILE")]
        verify_proof: Option<PathBuf>,
    },

    /// Search for a decision map after a fixed number of rounds.
    Solve {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rounds: usize,
    },

    /// Play the valency prover against an oracle.
    Flp {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, required_unless_present = "verify")]
        oracle: Option<OracleKind>,
        #[arg(long, required_unless_present = "verify")]
        steps: Option<usize>,
        /// Witness for the honest oracle: `{"assignment":{...}}` or a decide verdict.
        #[arg(long, value_name = "FILE", required_if_eq("oracle", "honest"))]
        witness: Option<PathBuf>,
        /// Also write the bare transcript here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Re-verify a transcript instead of running the prover.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["oracle", "steps", "witness", "out"])]
        verify: Option<PathBuf>,
    },

    /// Covering complexes and covering tasks.
    Covering {
        #[command(subcommand)]
        action: CoveringCommand,
    },

    /// Write DOT renderings of the input and output complexes.
    Export {
        #[command(flatten)]
        task: TaskArgs,
        /// Directory for `input.dot` and `output.dot`.
        #[arg(long, value_name = "DIR")]
        dot: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoveringCommand {
    /// Validate a covering candidate.
    Check {
        /// Candidate file or `builtin:cover:m=M,k=K`.
        #[arg(long)]
        candidate: String,
    },
    /// Print the cyclic cover of the m-cycle with k sheets.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Decide the covering task of a candidate.
    Impossibility {
        #[arg(long)]
        candidate: String,
        #[arg(long)]
        n: usize,
    },
}
