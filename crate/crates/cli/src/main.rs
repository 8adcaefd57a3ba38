//! `itdendro`: build in-tree dendrogram bundles, cut them, and compare against
//! single-link clustering.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itdendro::Error;

#[derive(Parser)]
#[command(name = "itdendro", version, about = "In-tree clustering with dendrogram views")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute potentials, the in-tree, and its merge table; write a bundle.
    Build(BuildArgs),
    /// Cut a bundle's in-tree by threshold or top-K and write the assignment CSV.
    Cut(CutArgs),
    /// List candidate thresholds at the widest gaps between merge heights.
    Suggest(SuggestArgs),
    /// Compare the in-tree cut with naive single-link clustering on the same data.
    Baseline(BaselineArgs),
    /// Draw a bundle's dendrogram (and scatterplot for planar data) as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Real,
    Categorical,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Hamming,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Gaussian,
    Exponential,
}

#[derive(Args)]
struct InputArgs {
    /// Data file, one instance per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "real")]
    format: Format,
    /// Defaults to euclidean for real data and hamming for categorical data.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Skip the first line of a real-valued file.
    #[arg(long)]
    header: bool,
    /// Zero-based column holding annotations (categorical files default to 0).
    #[arg(long)]
    label_column: Option<usize>,
    /// Kernel width of the potential field.
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    kernel: KernelArg,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Bundle file to write.
    #[arg(long)]
    out: PathBuf,
    /// Also write the dendrogram as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CutArgs {
    #[arg(long)]
    bundle: PathBuf,
    /// Remove in-tree edges with weight strictly above this value.
    #[arg(long, allow_negative_numbers = true, required_unless_present = "top_k", conflicts_with = "top_k")]
    threshold: Option<f64>,
    /// Remove the K heaviest in-tree edges.
    #[arg(long)]
    top_k: Option<usize>,
    /// Assignment CSV to write; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report errors and purity against the bundle's labels.
    #[arg(long)]
    eval: bool,
    /// Also write the dendrogram colored by cluster.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SuggestArgs {
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long, default_value_t = 5)]
    max: usize,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Threshold applied to both dendrograms; each uses its own widest gap when omitted.
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
    /// Directory for both assignment CSVs and the side-by-side SVG.
    #[arg(long)]
    out: PathBuf,
    /// Largest N accepted for the cubic single-link run.
    #[arg(long, default_value_t = 5000)]
    cap: usize,
    /// Report errors and purity against the labels.
    #[arg(long)]
    eval: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    /// Draw the threshold line and color the clusters below it.
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
    /// Also write a scatterplot when the bundle has planar coordinates.
    #[arg(long)]
    scatter: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) => 1,
        Error::EmptyInput
        | Error::Format { .. }
        | Error::Parse { .. }
        | Error::File { .. }
        | Error::Io(_)
        | Error::Json(_) => 2,
        Error::Integrity(_) | Error::Structure(_) | Error::Disconnected(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Build(a) => commands::build(&a),
        Command::Cut(a) => commands::cut(&a),
        Command::Suggest(a) => commands::suggest(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Render(a) => commands::render(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("itdendro: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
