use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use subspace_core::io::DataFormat;

#[derive(Debug, Parser)]
#[command(
    name = "subspace-kit",
    version,
    about = "Generate, cluster, evaluate and visualize subspace clusterings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset (CSV) and its ground truth (.clu)
    Generate(GenerateArgs),
    /// Run one algorithm on a dataset
    Cluster(ClusterArgs),
    /// Score a found clustering against a reference
    Evaluate(EvaluateArgs),
    /// Render a clustering as an HTML table and/or an SVG subspace matrix
    Visualize(VisualizeArgs),
    /// Run a JSON-configured source -> algorithms -> measures chain
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Arff,
    Csv,
}

impl From<FormatArg> for DataFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Arff => DataFormat::Arff,
            FormatArg::Csv => DataFormat::Csv,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator spec (JSON)
    #[arg(long)]
    pub spec: PathBuf,
    /// Dataset output (CSV)
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth output (.clu)
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// One of: clique, subclu, proclus, doc, fastdoc, mineclus
    #[arg(long)]
    pub algo: String,
    /// Algorithm parameter, repeatable
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Input format; inferred from the extension when omitted
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Clustering output (.clu)
    #[arg(long)]
    pub out: PathBuf,
    /// Also write PREFIX_dims.csv and PREFIX_objects.csv
    #[arg(long, value_name = "PREFIX")]
    pub tables: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report the run time on stderr
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("reference").required(true).args(["truth", "compare"])))]
pub struct EvaluateArgs {
    /// Found clustering (.clu)
    #[arg(long)]
    pub found: PathBuf,
    /// Ground-truth clustering (.clu)
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// A second found clustering to compare against instead of a ground truth
    #[arg(long)]
    pub compare: Option<PathBuf>,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Comma-separated measures, evaluated in order: ce, rnia, entropy, f1p, f1r, e4sc
    #[arg(long)]
    pub measure: String,
    /// Add per-cluster lines for f1p, f1r and e4sc
    #[arg(long)]
    pub per_cluster: bool,
    /// Append one result row to this CSV file
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("output").required(true).multiple(true).args(["html", "matrix"])))]
pub struct VisualizeArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Clustering (.clu)
    #[arg(long)]
    pub clusters: PathBuf,
    /// Colored object table (HTML)
    #[arg(long)]
    pub html: Option<PathBuf>,
    /// Cluster x dimension matrix (SVG)
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Comma-separated #rrggbb colors, cycled over clusters
    #[arg(long)]
    pub palette: Option<String>,
    /// List objects in no cluster in a trailing gray section
    #[arg(long)]
    pub show_unclustered: bool,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Pipeline config (JSON)
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report per-step run times on stderr
    #[arg(long)]
    pub timings: bool,
}
