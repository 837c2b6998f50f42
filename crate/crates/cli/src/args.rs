use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "blockrig",
    version,
    about = "Exact rigidity, game values and Turing machine experiments over F2",
    long_about = "Every command writes one table (CSV or JSON) whose header echoes the full \
                  configuration and the tool version. Identical configurations give \
                  byte-identical files; output paths are not part of the configuration."
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Largest joint strategy table (bits) for branch-and-bound.
    #[arg(long, global = true, env = "BLOCKRIG_BNB_BITS", default_value_t = 40)]
    pub bnb_bits: u64,
    /// Largest joint strategy table (bits) for plain enumeration.
    #[arg(long, global = true, env = "BLOCKRIG_EXHAUSTIVE_BITS", default_value_t = 24)]
    pub exhaustive_bits: u64,
    /// Largest number of view families swept by function rigidity.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub max_families: usize,
    /// Largest number of sparse patterns examined by matrix rigidity.
    #[arg(long, global = true, default_value_t = 1 << 40)]
    pub max_candidates: u64,
    /// Largest nk accepted by block matrix rigidity.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_block_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Bnb,
    Exhaustive,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Rank over F2 of a matrix file.
    #[command(after_help = "CSV columns:\n  rows  row count\n  cols  column count\n  rank  rank over F2")]
    Rank(RankArgs),

    /// Decide (r, s)-rigidity (or block rigidity) of a square matrix.
    #[command(after_help = "CSV columns:\n  \
        n         matrix dimension\n  \
        r         rank bound\n  \
        s         sparsity bound (entries, or blocks with --block-k)\n  \
        block_k   number of blocks, empty for plain rigidity\n  \
        rigid     true or false\n  \
        nodes     search nodes visited\n  \
        witness_b B of a decomposition A = B + C, rows joined by '/'\n  \
        witness_c C of that decomposition")]
    RigidMatrix(RigidMatrixArgs),

    /// Decide (r, s)-rigidity of a function f, or block rigidity of its tensor power.
    #[command(after_help = "CSV columns:\n  \
        k              arity\n  \
        n              tensor power (1 for plain rigidity)\n  \
        r              threshold exponent, rigid when every value < 2^-r\n  \
        s              view size\n  \
        rigid          true or false\n  \
        value          largest game value over view families\n  \
        value_decimal  the same to six decimals\n  \
        worst_views    first family attaining it, sets joined by ';'\n  \
        families       view families examined\n  \
        agreement      certificate agreement count, empty when rigid")]
    RigidFunction(RigidFunctionArgs),

    /// Count rigid functions of arity k, exhaustively or by seeded sample.
    #[command(after_help = "CSV columns:\n  \
        k                  arity\n  \
        r                  threshold exponent\n  \
        s                  view size\n  \
        mode               exhaustive or sample\n  \
        total              functions examined\n  \
        rigid              rigid functions among them\n  \
        fraction           rigid / total\n  \
        fraction_decimal   the same to six decimals")]
    Census(CensusArgs),

    /// Exact value of a game description file.
    #[command(after_help = "CSV columns:\n  \
        players         player count\n  \
        question_bits   uniform question bits\n  \
        answer_len      answer bits per player\n  \
        table_bits      joint strategy table size in bits\n  \
        solver          bnb or exhaustive\n  \
        value           exact value\n  \
        value_decimal   the same to six decimals\n  \
        wins            questions won by the optimal strategy\n  \
        questions       2^question_bits\n  \
        nodes           search nodes\n  \
        prunes          pruned subtrees\n  \
        strategy        optimal tables, players joined by ';', entries by ','")]
    GameValue(GameValueArgs),

    /// Repeated values of a game for n = 1..n_max against their bounds.
    #[command(after_help = "CSV columns:\n  \
        n                n-fold repetition\n  \
        lower            value^n\n  \
        exact            exact repeated value, empty beyond the budget\n  \
        upper            best single-player marginal value ^n\n  \
        exact_exponent   log(exact) / (n log value)\n  \
        upper_exponent   log(upper) / (n log value)")]
    RepeatDecay(RepeatDecayArgs),

    /// Transpose game values; all singleton row families when --views is absent.
    #[command(after_help = "CSV columns:\n  \
        n                  matrix dimension\n  \
        views              rows seen by each player, joined by ';'\n  \
        value              exact value\n  \
        value_decimal      the same to six decimals\n  \
        marginal           smallest per-player marginal value\n  \
        marginal_decimal   the same to six decimals")]
    TransposeGame(TransposeArgs),

    /// Matrix product game value.
    #[command(after_help = "CSV columns:\n  \
        n                  matrix dimension\n  \
        x_views            rows of X seen by each player\n  \
        y_views            rows of Y seen by each player\n  \
        value              exact value\n  \
        value_decimal      the same to six decimals\n  \
        marginal           smallest per-player marginal value\n  \
        marginal_decimal   the same to six decimals")]
    ProductGame(ProductArgs),

    /// Run a machine and check whether it is block respecting.
    #[command(after_help = "CSV columns:\n  \
        steps             steps taken\n  \
        halted            whether the halt state was reached\n  \
        output            output tape contents\n  \
        b                 segment and block length\n  \
        segments          ceil(steps / b)\n  \
        block_respecting  true or false\n  \
        violation_step    first step changing block off a segment boundary\n  \
        violation_tape    tape of that step")]
    TmRun(TmRunArgs),

    /// Computation graph, predecessor profile, greedy separator and summary size.
    #[command(after_help = "CSV columns:\n  \
        steps             steps taken\n  \
        b                 segment and block length\n  \
        vertices          segments\n  \
        edges             edges including path edges\n  \
        revisit_edges     edges that skip at least one segment\n  \
        max_degree        largest vertex degree\n  \
        pred_max          largest predecessor count\n  \
        pred_mean         mean predecessor count\n  \
        separator         removed segments, joined by ';'\n  \
        sep_pred_max      largest predecessor count after removal\n  \
        summary_bits      size of the summary transcribing the separator")]
    TmGraph(TmGraphArgs),

    /// Run the Tensor_k machine on seeded random instances.
    #[command(after_help = "CSV columns:\n  \
        k             arity\n  \
        n             rows\n  \
        m             input length\n  \
        instances     instances run\n  \
        mismatches    outputs differing from the reference\n  \
        steps         steps per instance (the count depends only on n)\n  \
        steps_per_n   steps / n\n  \
        c_k           generator constant\n  \
        bound         c_k * n * k * 2^k")]
    TensorKBench(TensorBenchArgs),

    /// Re-validate a stored decomposition or certificate.
    #[command(after_help = "CSV columns:\n  \
        kind     decomposition or certificate\n  \
        valid    true or false\n  \
        detail   reason when invalid, agreement count otherwise")]
    Validate(ValidateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rank(_) => "rank",
            Command::RigidMatrix(_) => "rigid-matrix",
            Command::RigidFunction(_) => "rigid-function",
            Command::Census(_) => "census",
            Command::GameValue(_) => "game-value",
            Command::RepeatDecay(_) => "repeat-decay",
            Command::TransposeGame(_) => "transpose-game",
            Command::ProductGame(_) => "product-game",
            Command::TmRun(_) => "tm-run",
            Command::TmGraph(_) => "tm-graph",
            Command::TensorKBench(_) => "tensor-k-bench",
            Command::Validate(_) => "validate",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RankArgs {
    /// Matrix file: `rows cols` then one 0/1 line per row.
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct RigidMatrixArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
    /// Treat the matrix as k x k blocks and count sparsity in blocks.
    #[arg(long)]
    pub block_k: Option<usize>,
    /// Write the decomposition as JSON for `validate`.
    #[arg(long)]
    #[serde(skip)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct FunctionSource {
    /// Truth-table file.
    #[arg(long, conflicts_with = "random_k", required_unless_present = "random_k")]
    pub function: Option<PathBuf>,
    /// Use a seeded random function of this arity instead.
    #[arg(long)]
    pub random_k: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct RigidFunctionArgs {
    #[command(flatten)]
    pub source: FunctionSource,
    /// Threshold exponent, an integer or fraction such as 3/2.
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub s: usize,
    /// Decide block rigidity of the n-th tensor power.
    #[arg(long)]
    pub block_n: Option<usize>,
    /// Write the certificate (when not rigid) as JSON for `validate`.
    #[arg(long)]
    #[serde(skip)]
    pub certificate_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub s: usize,
    /// Sample this many functions instead of enumerating all of them.
    #[arg(long)]
    pub samples: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GameValueArgs {
    /// Game description (JSON).
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, value_enum, default_value_t = Solver::Bnb)]
    pub solver: Solver,
}

#[derive(Debug, Args, Serialize)]
pub struct RepeatDecayArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct TransposeArgs {
    #[arg(long)]
    pub n: usize,
    /// Rows seen per player, e.g. `0;1` or `0,1;2;0`.
    #[arg(long)]
    pub views: Option<String>,
    #[arg(long, value_enum, default_value_t = Solver::Bnb)]
    pub solver: Solver,
}

#[derive(Debug, Args, Serialize)]
pub struct ProductArgs {
    #[arg(long)]
    pub n: usize,
    /// Rows of X seen per player, e.g. `0;1`.
    #[arg(long)]
    pub x_views: String,
    /// Rows of Y seen per player.
    #[arg(long)]
    pub y_views: String,
}

#[derive(Debug, Args, Serialize)]
pub struct MachineSource {
    /// Machine description file.
    #[arg(long, conflicts_with = "tensor_k", required_unless_present = "tensor_k")]
    pub machine: Option<PathBuf>,
    /// Input string for --machine.
    #[arg(long, conflicts_with = "input_file")]
    pub input: Option<String>,
    #[arg(long)]
    pub input_file: Option<PathBuf>,
    #[arg(long)]
    pub advice_file: Option<PathBuf>,
    /// Use the generated Tensor_k machine on a seeded random instance.
    #[arg(long, requires = "n")]
    pub tensor_k: Option<usize>,
    /// Rows of the Tensor_k instance.
    #[arg(long)]
    pub n: Option<usize>,
    /// Segment and block length; defaults to n for Tensor_k runs.
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long, default_value_t = 10_000_000)]
    pub step_limit: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct TmRunArgs {
    #[command(flatten)]
    pub source: MachineSource,
    /// Write a JSON trace: head positions every --trace-every configurations
    /// and the blocks visited in each segment.
    #[arg(long)]
    #[serde(skip)]
    pub trace_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub trace_every: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct TmGraphArgs {
    #[command(flatten)]
    pub source: MachineSource,
    /// Vertices the greedy separator may remove.
    #[arg(long, default_value_t = 0)]
    pub separator_budget: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TensorBenchArgs {
    #[arg(long)]
    pub k: usize,
    /// Comma-separated row counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub instances: usize,
    /// Largest k the generator accepts.
    #[arg(long, default_value_t = blockrig::tmsim::DEFAULT_TENSOR_K_CAP)]
    pub k_cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    /// Matrix the decomposition should sum to.
    #[arg(long, requires_all = ["decomposition", "r", "s"], conflicts_with = "function")]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub block_k: Option<usize>,
    /// Truth table the certificate should agree with.
    #[arg(long, requires = "certificate")]
    pub function: Option<PathBuf>,
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}
