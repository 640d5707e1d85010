use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "kgamma", version, about = "Extended gamma and beta k-functions: evaluation, identity audit, distribution")]
pub struct Cli {
    /// Print every default (quadrature, series, tolerances, audit grid) as JSON and exit
    #[arg(long)]
    pub show_config: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one function at one point
    Eval(EvalArgs),
    /// Run the identity audit over a parameter grid
    Audit(AuditArgs),
    /// Query the generalized beta distribution
    Dist(DistArgs),
    /// Tabulate a function over a range of one binding
    Table(TableArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum Function {
    KGamma,
    KBeta,
    MittagLefflerK,
    ExtendedGammaK,
    ExtendedBetaK,
    IncompleteExtendedBetaK,
    EvalRepresentation,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Named parameter bindings shared by `eval` and `table`.
#[derive(Args, Debug, Clone, Default)]
pub struct Bindings {
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Argument of the Mittag-Leffler function
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Upper limit of the incomplete beta integral
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Denominator gamma: classical or k-deformed
    #[arg(long)]
    pub mode: Option<String>,
    /// Representation, e.g. `trig`, `power(n=3)`, `interval(eta=2,zeta=7)`
    #[arg(long)]
    pub rep: Option<String>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    #[command(flatten)]
    pub bindings: Bindings,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    /// Binding to vary
    #[arg(long)]
    pub var: String,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    /// Number of points, endpoints included
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[command(flatten)]
    pub bindings: Bindings,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridChoice {
    Default,
    Empty,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long, value_enum, default_value = "default")]
    pub grid: GridChoice,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ks: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ss: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ts: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub vs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ps: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub qs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub rs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
    /// Check families to run, e.g. `symmetry,functional_relation`
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mellin_gs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mellin_ss: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mellin_ts: Option<Vec<f64>>,
    /// Tolerance override `name=value`, e.g. `symmetry=1e-12`; repeatable
    #[arg(long = "tol")]
    pub tolerances: Vec<String>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    Pdf,
    Cdf,
    Moment,
    Mean,
    Variance,
    Mgf,
    Quantile,
    Sample,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub query: Query,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    /// Upper index of the Mittag-Leffler factor
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long)]
    pub mode: Option<String>,
    /// Point for `pdf`
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Point for `cdf`, argument for `mgf`
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Probability level for `quantile`
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<f64>,
    /// Order for `moment`
    #[arg(long, allow_hyphen_values = true)]
    pub order: Option<f64>,
    /// Sample size for `sample`
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Series cap for `mgf`
    #[arg(long)]
    pub max_terms: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}
