//! JSON-configured runs: source -> algorithm steps -> measures -> outputs.
//!
//! The config is fully validated (shape, algorithm names and parameters,
//! measure names, truth availability) before anything runs. Measures always
//! compare the last step's result with the truth. Relative paths are
//! resolved against the directory of the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;
use serde_json::Value;

use subspace_core::evaluation::{EvaluationReport, Measure};
use subspace_core::generator::{generate, GeneratorSpec};
use subspace_core::io::{self, DataFormat};
use subspace_core::visualization::{emit_colored_table, emit_subspace_matrix, ColorAssignment, TableOptions};
use subspace_core::{Algorithm, Clustering, Dataset};

use crate::args::PipelineArgs;
use crate::commands::{load_clustering, summary_lines};
use crate::{ensure_parent, io_error, read_text, resolve_seed, CliError};

/// Schema shipped with the crate; [`PipelineConfig::parse`] enforces the
/// same structure.
pub const SCHEMA: &str = include_str!("../schema/pipeline.schema.json");

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub source: Source,
    pub steps: Vec<Step>,
    #[serde(default)]
    pub measures: Vec<String>,
    #[serde(default)]
    pub outputs: Outputs,
    pub seed: Option<u64>,
}

/// Either a data file (optionally with its ground truth) or a generator.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    pub file: Option<PathBuf>,
    pub format: Option<String>,
    pub truth: Option<PathBuf>,
    pub generator: Option<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub algorithm: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub clusters: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub html: Option<PathBuf>,
    pub matrix: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: PipelineConfig =
            serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid pipeline config: {e}")))?;
        cfg.check_shape()?;
        Ok(cfg)
    }

    fn check_shape(&self) -> Result<(), CliError> {
        let s = &self.source;
        match (&s.file, &s.generator) {
            (Some(_), Some(_)) => return Err(CliError::usage("source: give either file or generator, not both")),
            (None, None) => return Err(CliError::usage("source: needs file or generator")),
            (None, Some(_)) if s.format.is_some() || s.truth.is_some() => {
                return Err(CliError::usage("source: format and truth only apply to file sources"))
            }
            _ => {}
        }
        if let Some(f) = &s.format {
            if DataFormat::parse(f).is_none() {
                return Err(CliError::usage(format!(
                    "source.format: expected arff or csv, got {f:?}"
                )));
            }
        }
        if self.steps.is_empty() {
            return Err(CliError::usage("steps: at least one step is required"));
        }
        if !self.measures.is_empty() && s.file.is_some() && s.truth.is_none() {
            return Err(CliError::usage(
                "truth required: measures need a ground truth; add source.truth or use a generator source",
            ));
        }
        Ok(())
    }
}

fn param_text(key: &str, v: &Value) -> Result<String, CliError> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(CliError::usage(format!(
            "param {key}: expected a number, string or boolean"
        ))),
    }
}

/// Builds every step's algorithm. A command-line seed replaces explicit
/// per-step seeds; otherwise a step's own seed wins over the global one.
pub fn build_steps(steps: &[Step], global_seed: u64, cli_seed: Option<u64>) -> Result<Vec<Algorithm>, CliError> {
    steps
        .iter()
        .enumerate()
        .map(|(i, step)| {
            let mut params = BTreeMap::new();
            for (k, v) in &step.params {
                params.insert(k.clone(), param_text(k, v)?);
            }
            if let (Some(s), Some(slot)) = (cli_seed, params.get_mut("seed")) {
                *slot = s.to_string();
            }
            Algorithm::from_params(&step.algorithm, &params, global_seed)
                .map_err(|e| CliError::from(e).prefixed(&format!("step {}", i + 1)))
        })
        .collect()
}

impl CliError {
    fn prefixed(self, context: &str) -> Self {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{context}: {m}")),
            CliError::Runtime(m) => CliError::Runtime(format!("{context}: {m}")),
        }
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

struct Loaded {
    data: Dataset,
    truth: Option<Clustering>,
    description: String,
}

fn load_source(source: &Source, base: &Path, seed: u64, cli_seed: Option<u64>) -> Result<Loaded, CliError> {
    if let Some(spec) = &source.generator {
        let mut spec = spec.clone();
        spec.seed = Some(cli_seed.or(spec.seed).unwrap_or(seed));
        let g = generate(&spec)?;
        let description = format!("generator n={} d={} k={}", g.data.n(), g.data.d(), g.truth.len());
        return Ok(Loaded {
            data: g.data,
            truth: Some(g.truth),
            description,
        });
    }
    let file = resolve(base, source.file.as_ref().expect("checked by check_shape"));
    let format = source.format.as_deref().and_then(DataFormat::parse);
    let data = io::read_dataset(&file, format).map_err(|e| io_error(&file, e))?;
    let truth = match &source.truth {
        Some(t) => Some(load_clustering(&resolve(base, t), &data)?),
        None => None,
    };
    let name = file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Loaded {
        description: format!("file {name} n={} d={}", data.n(), data.d()),
        data,
        truth,
    })
}

/// Runs the config and returns the stdout report block.
pub fn execute(cfg: &PipelineConfig, base: &Path, cli_seed: Option<u64>, timings: bool) -> Result<String, CliError> {
    let seed = resolve_seed(cli_seed, cfg.seed)?;
    let measures = cfg
        .measures
        .iter()
        .map(|m| m.parse::<Measure>())
        .collect::<Result<Vec<_>, _>>()?;
    let algorithms = build_steps(&cfg.steps, seed, cli_seed)?;

    let source = load_source(&cfg.source, base, seed, cli_seed)?;
    let data = &source.data;
    let mut out = format!("source: {}\n", source.description);

    let mut last = None;
    for (i, algo) in algorithms.iter().enumerate() {
        let started = Instant::now();
        let result = algo
            .run(data)
            .map_err(|e| CliError::from(e).prefixed(&format!("step {}", i + 1)))?;
        if timings {
            eprintln!(
                "step {} ({}): {:.1} ms",
                i + 1,
                algo.name(),
                started.elapsed().as_secs_f64() * 1e3
            );
        }
        out.push_str(&format!("step {}: {}, {} clusters\n", i + 1, algo.name(), result.len()));
        out.push_str(&summary_lines(&result, data.dim_names()));
        last = Some(result);
    }
    let last = last.expect("at least one step");

    let report = match (&source.truth, measures.is_empty()) {
        (Some(truth), false) => {
            let r = EvaluationReport::compute(&measures, &last, truth, data, false)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            out.push_str("report:\n");
            out.push_str(&r.to_lines());
            r.to_lines()
        }
        _ => String::new(),
    };

    let o = &cfg.outputs;
    if let Some(p) = &o.clusters {
        let p = resolve(base, p);
        ensure_parent(&p)?;
        io::write_clu(&last, &p).map_err(|e| io_error(&p, e))?;
    }
    if let Some(p) = &o.report {
        let p = resolve(base, p);
        ensure_parent(&p)?;
        io::write_file(&p, &report).map_err(|e| io_error(&p, e))?;
    }
    if let Some(p) = &o.html {
        let p = resolve(base, p);
        ensure_parent(&p)?;
        emit_colored_table(data, &last, &ColorAssignment::default(), &TableOptions::default(), &p)?;
    }
    if let Some(p) = &o.matrix {
        let p = resolve(base, p);
        ensure_parent(&p)?;
        emit_subspace_matrix(&last, data.dim_names(), &p)?;
    }
    Ok(out)
}

pub fn run_pipeline(args: &PipelineArgs) -> Result<(), CliError> {
    let cfg = PipelineConfig::parse(&read_text(&args.config)?)?;
    let base = args.config.parent().unwrap_or(Path::new("")).to_path_buf();
    let out = execute(&cfg, &base, args.seed, args.timings)?;
    print!("{out}");
    Ok(())
}
