use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "cutseq", version, about = "Cutting sequences on regular 2n-gon translation surfaces")]
pub struct Cli {
    /// Seed for sampled start points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Re-run the command recorded in a manifest (a JSON output or an SVG plot).
    #[arg(long, value_name = "FILE", conflicts_with = "pretty")]
    pub replay: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace a trajectory and print its cutting sequence.
    Trace(TraceArgs),
    /// Derive a word (keep the sandwiched letters).
    Derive(DeriveArgs),
    /// Transition diagrams, permutations and the polygon itself.
    Diagrams(DiagramsArgs),
    /// Recover the sector sequence and direction interval of a word.
    Recognize(RecognizeArgs),
    /// Farey itinerary and interval of a direction.
    ExpandDirection(ExpandArgs),
    /// Apply a generation operator g(k -> i).
    Generate(GenerateArgs),
    /// Periodic seed words P_k.
    Seeds(SeedsArgs),
    /// Periodic families P(s_0, .., s_k).
    Families(FamiliesArgs),
    /// Factors of a given length of the cutting sequences in a direction.
    Enumerate(EnumerateArgs),
    /// Coherence of a word along its renormalization.
    CheckCoherence(CoherenceArgs),
    /// Factor complexity of traced words.
    Complexity(ComplexityArgs),
    /// SVG picture of a trajectory.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DirectionArgs {
    /// Angle in radians, or an exact multiple such as "3*pi/8".
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Exact cotangent of the angle, e.g. "1/2+3/4*sqrt2".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "theta")]
    pub cot: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct TrajectoryArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub dir: DirectionArgs,
    #[arg(long, default_value_t = 100)]
    pub crossings: usize,
    /// Start point "x,y"; sampled from --seed when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Exact arithmetic (octagon only); coordinates may be rationals like "1/7".
    #[arg(long)]
    pub exact: bool,
    /// Vertex tolerance for floating traces.
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub traj: TrajectoryArgs,
    /// Omit the per-crossing log.
    #[arg(long)]
    pub no_log: bool,
    /// Also search for a period within the crossing budget.
    #[arg(long)]
    pub detect_period: bool,
}

#[derive(Args, Debug)]
pub struct WordArgs {
    /// A word, "per:" for periodic words, or a file containing one.
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub word: WordArgs,
    /// Bring the word to normal form before each derivation.
    #[arg(long)]
    pub normalize: bool,
    /// Number of derivations.
    #[arg(long, default_value_t = 1)]
    pub times: usize,
}

#[derive(Args, Debug)]
pub struct DiagramsArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Only this diagram.
    #[arg(long)]
    pub index: Option<usize>,
    /// List the diagrams admitting this word.
    #[arg(long)]
    pub word: Option<String>,
    /// Include the polygon geometry.
    #[arg(long)]
    pub polygon: bool,
}

#[derive(Args, Debug)]
pub struct RecognizeArgs {
    #[command(flatten)]
    pub word: WordArgs,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Maximum number of sector sequences listed per start for periodic words.
    #[arg(long, default_value_t = 16)]
    pub limit: usize,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub dir: DirectionArgs,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub word: WordArgs,
    #[arg(long)]
    pub from: usize,
    #[arg(long)]
    pub to: usize,
}

#[derive(Args, Debug)]
pub struct SeedsArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct FamiliesArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Comma-separated sectors s_0, .., s_k.
    #[arg(long)]
    pub prefix: String,
    /// "periodic", or a comma-separated list of seed words.
    #[arg(long, default_value = "periodic")]
    pub seeds: String,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub dir: DirectionArgs,
    /// Comma-separated sector prefix, instead of a direction.
    #[arg(long, conflicts_with_all = ["theta", "cot"])]
    pub prefix: Option<String>,
    #[arg(long)]
    pub len: usize,
    /// Fixed family depth; otherwise the depth grows until the set is stable.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 40)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 1 << 24)]
    pub max_letters: usize,
}

#[derive(Args, Debug)]
pub struct CoherenceArgs {
    #[command(flatten)]
    pub word: WordArgs,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Check a single pair "i,j".
    #[arg(long)]
    pub pair: Option<String>,
    /// Start diagram for the renormalization.
    #[arg(long)]
    pub start: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ComplexityArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[command(flatten)]
    pub dir: DirectionArgs,
    /// Largest factor length.
    #[arg(long)]
    pub len: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub crossings: usize,
    /// Number of sampled start points, traced in parallel.
    #[arg(long, default_value_t = 1)]
    pub starts: usize,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    pub traj: TrajectoryArgs,
}
