mod commands;
mod fraenkel;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use henkin::schemas::{Family, OrderKind};

/// Model checking for second-order predicate logic over finite Henkin
/// structures, permutation models and the basic Fraenkel model.
///
/// Reports go to stdout as JSON, a summary line to stderr. Exit codes:
/// 0 true / holds, 1 false / fails, 2 input error, 3 cap exceeded.
#[derive(Parser, Debug)]
#[command(name = "henkin", version)]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Caps {
    /// Largest predicate domain built or enumerated.
    #[arg(long, global = true, env = "HENKIN_CAP_TABLES", default_value_t = 1 << 16)]
    pub cap_tables: usize,
    /// Largest number of individuals accepted.
    #[arg(long, global = true, default_value_t = henkin::model::DEFAULT_MAX_INDIVIDUALS)]
    pub cap_individuals: usize,
    /// Largest group order materialised.
    #[arg(long, global = true, default_value_t = henkin::symmetry::DEFAULT_MAX_ORDER)]
    pub cap_group_order: usize,
    /// Symbolic predicates enumerated by one Fraenkel evaluation.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub cap_predicates: u64,
    /// Equality types a quantified symbolic predicate may range over.
    #[arg(long, global = true, default_value_t = 20)]
    pub cap_types: usize,
    /// Predicates per support size in the well-order sweep.
    #[arg(long, global = true, default_value_t = henkin::fraenkel::DEFAULT_SWEEP_CAP)]
    pub cap_sweep: u64,
}

/// A formula from a file or inline text.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct FormulaArg {
    /// File holding the formula.
    #[arg(long)]
    pub formula: Option<PathBuf>,
    /// The formula as text.
    #[arg(long, short = 'e')]
    pub expr: Option<String>,
}

/// `H` from a file or inline text.
#[derive(Args, Debug, Clone, Default)]
pub struct PayloadArg {
    /// File holding the payload formula H.
    #[arg(long)]
    pub h: Option<PathBuf>,
    /// H as text.
    #[arg(long, conflicts_with = "h")]
    pub h_expr: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Order {
    Strict,
    Reflexive,
}

impl From<Order> for OrderKind {
    fn from(o: Order) -> Self {
        match o {
            Order::Strict => OrderKind::Strict,
            Order::Reflexive => OrderKind::Reflexive,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Policy {
    Full,
    PredicatesOnly,
}

impl From<Policy> for henkin::model::ParameterPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Full => henkin::model::ParameterPolicy::Full,
            Policy::PredicatesOnly => henkin::model::ParameterPolicy::PredicatesOnly,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula, print it canonically and report its well-formedness.
    Parse {
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Evaluate a formula in a structure under an assignment.
    Eval {
        #[arg(long)]
        structure: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        /// JSON object from variable tokens to labels or table bitstrings.
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Check an axiom schema instance by exhaustive search.
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        schema: Family,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        payload: PayloadArg,
        #[arg(long, value_enum, default_value_t = Order::Strict)]
        order: Order,
    },
    /// Close a structure under definability up to a formula depth.
    Saturate {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Policy::Full)]
        policy: Policy,
        /// Also write the saturated structure here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the permutation model of the individuals, group and filter
    /// given in a structure file.
    BuildModel {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_arity: u32,
        /// Also write the model here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded corpus of well-formed formulas.
    Corpus {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// The basic Fraenkel model.
    #[command(subcommand)]
    Fraenkel(FraenkelCommand),
}

#[derive(Subcommand, Debug)]
pub enum FraenkelCommand {
    /// Enumerate every binary predicate with support of at most
    /// `max-support` atoms and test the linear order axioms on each.
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_support: usize,
        #[arg(long, value_enum, default_value_t = Order::Strict)]
        order: Order,
    },
    /// Evaluate a formula at a stratum.
    Eval {
        #[command(flatten)]
        formula: FormulaArg,
        /// JSON object from variable tokens to atom names or predicates.
        #[arg(long)]
        bind: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        strat: usize,
    },
    /// Search a witness for a choice instance.
    Choice {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        payload: PayloadArg,
        #[arg(long, default_value_t = 2)]
        strat: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Parse { formula } => commands::parse(&formula, cli.timing),
        Command::Eval {
            structure,
            formula,
            assignment,
        } => commands::eval(
            &structure,
            &formula,
            assignment.as_deref(),
            &cli.caps,
            cli.timing,
        ),
        Command::Check {
            structure,
            schema,
            n,
            m,
            payload,
            order,
        } => commands::check(
            &structure,
            schema,
            n,
            m,
            &payload,
            order.into(),
            &cli.caps,
            cli.timing,
        ),
        Command::Saturate {
            structure,
            depth,
            policy,
            out,
        } => commands::saturate(
            &structure,
            depth,
            policy.into(),
            out.as_deref(),
            &cli.caps,
            cli.timing,
        ),
        Command::BuildModel {
            structure,
            max_arity,
            out,
        } => commands::build_model(&structure, max_arity, out.as_deref(), &cli.caps, cli.timing),
        Command::Corpus { depth, seed, count } => commands::corpus(depth, seed, count, cli.timing),
        Command::Fraenkel(sub) => fraenkel::run(sub, &cli.caps, cli.timing),
    };
    ExitCode::from(code as u8)
}
