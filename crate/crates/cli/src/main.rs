mod commands;
mod ranges;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Repetition certificates for automatic, morphic and pushdown sequences.
#[derive(Parser, Debug)]
#[command(name = "repcert", version)]
pub struct Cli {
    /// Report format for tables and summaries.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the first symbols of a machine or digit stream.
    Digits(DigitsArgs),
    /// Repetition profile, factor complexity, dilation and growth tables.
    Analyze(AnalyzeArgs),
    /// Build a repetition certificate.
    Certify(CertifyArgs),
    /// Re-check a certificate against its source.
    Verify(VerifyArgs),
    /// Convert between uniform morphisms and automata.
    Convert(ConvertArgs),
    /// Sampled dilation ratios of a tag machine.
    Dilation(DilationArgs),
    /// Per-letter growth of a morphism.
    Growth(GrowthArgs),
    /// Search for equivalent configurations of a pushdown machine.
    Equiv(EquivArgs),
    /// Best agreement between small automata and a digit stream.
    Imitate(ImitateArgs),
    /// Continued fraction of a quadratic surd.
    Cf(CfArgs),
    /// Built-in machines.
    Catalog(CatalogArgs),
}

/// Where the symbols come from: a machine file (or `catalog:NAME`) or a
/// digit stream such as `surd:2`, `rational:1/3`, `xi3`, `file:PATH`.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    #[arg(long, conflicts_with = "stream")]
    pub machine: Option<String>,
    #[arg(long)]
    pub stream: Option<String>,
    /// Base of the digit stream.
    #[arg(long, default_value_t = 10)]
    pub base: u32,
}

#[derive(Args, Debug)]
pub struct DigitsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value = "40")]
    pub count: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Prefix lengths for the repetition profile.
    #[arg(long)]
    pub dio: Option<String>,
    /// Period cap: `half`, `unbounded` or a number.
    #[arg(long, default_value = "half")]
    pub cap: String,
    /// Factor lengths for the complexity table.
    #[arg(long)]
    pub complexity: Option<String>,
    /// Prefix length used for complexity counts.
    #[arg(long)]
    pub prefix: Option<String>,
    /// Largest n for the dilation profile.
    #[arg(long)]
    pub dilation: Option<String>,
    #[arg(long)]
    pub growth: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Check a given pair `n,n'` instead of searching.
    #[arg(long)]
    pub pair: Option<String>,
    /// Base of the pair identities.
    #[arg(long)]
    pub k: Option<u32>,
    /// Largest n scanned by the pushdown pair search.
    #[arg(long, default_value_t = 1 << 16)]
    pub budget: u64,
    /// Largest stack height tracked exactly by the pair search.
    #[arg(long, default_value_t = 64)]
    pub height_cap: usize,
    #[arg(long, default_value_t = 10)]
    pub depth: u32,
    /// Certificate file; without it the certificate goes to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub certificate: PathBuf,
    /// Extra pair levels checked beyond the stored depth.
    #[arg(long, default_value_t = 0)]
    pub extra_depth: u32,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[arg(long)]
    pub machine: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DilationArgs {
    #[arg(long)]
    pub machine: String,
    #[arg(long, default_value = "10^4")]
    pub max_n: String,
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    #[arg(long)]
    pub machine: String,
}

#[derive(Args, Debug)]
pub struct EquivArgs {
    #[arg(long)]
    pub machine: String,
    /// Compare the configurations of `n,n'` instead of searching.
    #[arg(long)]
    pub pair: Option<String>,
    /// Longest distinguishing word tried for `--pair`.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(long, default_value_t = 1 << 16)]
    pub budget: u64,
    #[arg(long, default_value_t = 64)]
    pub height_cap: usize,
}

#[derive(Args, Debug)]
pub struct ImitateArgs {
    #[arg(long, default_value = "surd:2")]
    pub stream: String,
    /// Base of the digit stream.
    #[arg(long, default_value_t = 2)]
    pub base: u32,
    /// Input base of the automata.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub states: u32,
    #[arg(long, default_value_t = 64)]
    pub len: usize,
    /// Write the best automaton here.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CfArgs {
    /// The surd is `sqrt(d)`.
    #[arg(long)]
    pub d: u64,
    /// Number of convergents.
    #[arg(long, default_value_t = 8)]
    pub count: usize,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[command(subcommand)]
    pub action: CatalogAction,
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// Names of the built-in machines.
    List,
    /// Print one machine file.
    Show { name: String },
    /// Write every machine file into a directory.
    Export {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
