use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use subspace_core::evaluation::{EvaluationReport, Measure};
use subspace_core::generator::{generate as run_generator, GeneratorSpec};
use subspace_core::io::{self, DataFormat};
use subspace_core::visualization::{emit_colored_table, emit_subspace_matrix, ColorAssignment, TableOptions};
use subspace_core::{Algorithm, Clustering, Dataset};

use crate::args::{ClusterArgs, EvaluateArgs, FormatArg, GenerateArgs, VisualizeArgs};
use crate::{ensure_parent, io_error, read_text, resolve_seed, CliError};

pub fn parse_spec(text: &str, origin: &Path) -> Result<GeneratorSpec, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("{}: invalid generator spec: {e}", origin.display())))
}

pub fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let mut spec = parse_spec(&read_text(&args.spec)?, &args.spec)?;
    spec.seed = Some(resolve_seed(args.seed, spec.seed)?);
    let g = run_generator(&spec)?;
    ensure_parent(&args.out)?;
    ensure_parent(&args.truth)?;
    io::write_dataset_csv(&g.data, &args.out).map_err(|e| io_error(&args.out, e))?;
    io::write_clu(&g.truth, &args.truth).map_err(|e| io_error(&args.truth, e))?;
    println!("n={} d={} k={}", g.data.n(), g.data.d(), g.truth.len());
    Ok(())
}

pub fn load_dataset(path: &Path, format: Option<FormatArg>) -> Result<Dataset, CliError> {
    io::read_dataset(path, format.map(DataFormat::from)).map_err(|e| io_error(path, e))
}

pub fn load_clustering(path: &Path, data: &Dataset) -> Result<Clustering, CliError> {
    io::read_clu(path, data.n(), data.d()).map_err(|e| io_error(path, e))
}

/// Splits `key=value` command-line parameters.
pub fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("parameter {item:?} is not KEY=VALUE")))?;
        let key = k.trim().to_string();
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::usage(format!("parameter {key} given twice")));
        }
    }
    Ok(out)
}

/// `cluster <id>: <|O|> objects, dims {name, ...}` per cluster.
pub fn summary_lines(c: &Clustering, dim_names: &[String]) -> String {
    let mut out = String::new();
    for (id, cl) in c.clusters().iter().enumerate() {
        let dims: Vec<&str> = cl.dims().iter().map(|&j| dim_names[j].as_str()).collect();
        out.push_str(&format!(
            "cluster {id}: {} objects, dims {{{}}}\n",
            cl.objects().len(),
            dims.join(", ")
        ));
    }
    out
}

pub fn table_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    let with = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    (with("_dims.csv"), with("_objects.csv"))
}

pub fn cluster(args: &ClusterArgs) -> Result<(), CliError> {
    let params = parse_params(&args.params)?;
    let algo = Algorithm::from_params(&args.algo, &params, resolve_seed(args.seed, None)?)?;
    let data = load_dataset(&args.input, args.format)?;
    let started = Instant::now();
    let result = algo.run(&data)?;
    if args.timings {
        eprintln!("{}: {:.1} ms", algo.name(), started.elapsed().as_secs_f64() * 1e3);
    }

    ensure_parent(&args.out)?;
    io::write_clu(&result, &args.out).map_err(|e| io_error(&args.out, e))?;
    if let Some(prefix) = &args.tables {
        let (dims, objects) = table_paths(prefix);
        ensure_parent(&dims)?;
        io::write_cluster_tables(&result, Some(data.dim_names()), &dims, &objects).map_err(|e| io_error(&dims, e))?;
    }
    print!("{}", summary_lines(&result, data.dim_names()));
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let measures = Measure::parse_list(&args.measure)?;
    let data = load_dataset(&args.data, args.format)?;
    let found = load_clustering(&args.found, &data)?;
    let reference_path = args
        .truth
        .as_ref()
        .or(args.compare.as_ref())
        .expect("clap requires --truth or --compare");
    let reference = load_clustering(reference_path, &data)?;

    let report = EvaluationReport::compute(&measures, &found, &reference, &data, args.per_cluster)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", report.to_lines());

    if let Some(csv) = &args.csv {
        append_csv_row(csv, &report, &args.found, reference_path)?;
    }
    Ok(())
}

fn append_csv_row(csv: &Path, report: &EvaluationReport, found: &Path, reference: &Path) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::runtime(format!("{}: {e}", csv.display()));
    ensure_parent(csv)?;
    let fresh = std::fs::metadata(csv).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new().create(true).append(true).open(csv).map_err(fail)?;
    let mut text = String::new();
    if fresh {
        text.push_str(&format!("found,reference,{}\n", report.csv_header()));
    }
    text.push_str(&format!(
        "{},{},{}\n",
        found.display(),
        reference.display(),
        report.csv_row()
    ));
    file.write_all(text.as_bytes()).map_err(fail)
}

pub fn visualize(args: &VisualizeArgs) -> Result<(), CliError> {
    let colors = match &args.palette {
        Some(list) => ColorAssignment::parse(list)?,
        None => ColorAssignment::default(),
    };
    let data = load_dataset(&args.data, args.format)?;
    let clustering = load_clustering(&args.clusters, &data)?;
    if let Some(html) = &args.html {
        ensure_parent(html)?;
        let options = TableOptions {
            show_unclustered: args.show_unclustered,
            title: None,
        };
        emit_colored_table(&data, &clustering, &colors, &options, html)?;
    }
    if let Some(svg) = &args.matrix {
        ensure_parent(svg)?;
        emit_subspace_matrix(&clustering, data.dim_names(), svg)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_split_on_first_equals() {
        let p = parse_params(&["k=3".into(), " l = 4 ".into(), "x=a=b".into()]).unwrap();
        assert_eq!(p["k"], "3");
        assert_eq!(p["l"], "4");
        assert_eq!(p["x"], "a=b");
        assert!(parse_params(&["k".into()]).is_err());
        assert!(parse_params(&["k=1".into(), "k=2".into()]).is_err());
    }

    #[test]
    fn table_paths_append_suffixes() {
        let (d, o) = table_paths(Path::new("out/run"));
        assert_eq!(d, PathBuf::from("out/run_dims.csv"));
        assert_eq!(o, PathBuf::from("out/run_objects.csv"));
    }
}
