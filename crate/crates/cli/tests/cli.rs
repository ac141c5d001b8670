use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use subspace_core::io::{read_clu, read_dataset};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subspace-kit"));
    c.env_remove("SUBSPACE_KIT_SEED");
    c
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn iris() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/iris.arff")
}

const SPEC: &str = r#"{"n_clustered": 90, "n_noise": 10, "d": 6, "k": 3, "dims_min": 2, "dims_max": 3}"#;

fn generated(dir: &Path) {
    fs::write(dir.join("spec.json"), SPEC).unwrap();
    let o = run(
        &[
            "generate",
            "--spec",
            "spec.json",
            "--out",
            "data.csv",
            "--truth",
            "truth.clu",
            "--seed",
            "3",
        ],
        dir,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn generate_writes_round_trippable_files() {
    let dir = tempfile::tempdir().unwrap();
    generated(dir.path());
    let data = read_dataset(&dir.path().join("data.csv"), None).unwrap();
    assert_eq!((data.n(), data.d()), (100, 6));
    let truth = read_clu(&dir.path().join("truth.clu"), 100, 6).unwrap();
    assert_eq!(truth.len(), 3);
}

#[test]
fn generate_summary_and_rerun_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("spec.json"), SPEC).unwrap();
    let args = [
        "generate",
        "--spec",
        "spec.json",
        "--out",
        "a.csv",
        "--truth",
        "a.clu",
        "--seed",
        "9",
    ];
    let first = run(&args, p);
    assert_eq!(stdout(&first), "n=100 d=6 k=3\n");
    let (csv, clu) = (fs::read(p.join("a.csv")).unwrap(), fs::read(p.join("a.clu")).unwrap());
    let second = run(&args, p);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(csv, fs::read(p.join("a.csv")).unwrap());
    assert_eq!(clu, fs::read(p.join("a.clu")).unwrap());
}

#[test]
fn generate_rejects_bad_spec_with_field_name() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"n_clustered": 90, "d": 6, "k": 3, "dims_min": 4, "dims_max": 3}"#,
    )
    .unwrap();
    let o = run(
        &["generate", "--spec", "bad.json", "--out", "x.csv", "--truth", "x.clu"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dims_min"), "{}", stderr(&o));
    let missing = run(
        &["generate", "--spec", "nope.json", "--out", "x.csv", "--truth", "x.clu"],
        dir.path(),
    );
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("spec.json"), SPEC).unwrap();
    let with_env = |seed: &str, out: &str| {
        bin()
            .args([
                "generate",
                "--spec",
                "spec.json",
                "--out",
                out,
                "--truth",
                &format!("{out}.clu"),
            ])
            .env("SUBSPACE_KIT_SEED", seed)
            .current_dir(p)
            .output()
            .unwrap()
    };
    assert!(with_env("3", "env.csv").status.success());
    let o = run(
        &[
            "generate",
            "--spec",
            "spec.json",
            "--out",
            "cli.csv",
            "--truth",
            "cli.clu",
            "--seed",
            "3",
        ],
        p,
    );
    assert!(o.status.success());
    assert_eq!(
        fs::read(p.join("env.csv")).unwrap(),
        fs::read(p.join("cli.csv")).unwrap()
    );
    assert_eq!(with_env("x", "bad.csv").status.code(), Some(2));
}

#[test]
fn cluster_proclus_on_iris() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "cluster",
            "--algo",
            "proclus",
            "--param",
            "k=3",
            "--param",
            "l=3",
            "--in",
            iris().to_str().unwrap(),
            "--out",
            "iris.clu",
            "--tables",
            "iris",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3, "{out}");
    for (i, l) in lines.iter().enumerate() {
        assert!(l.starts_with(&format!("cluster {i}: ")), "{l}");
        assert!(l.contains(" objects, dims {"), "{l}");
    }
    assert!(dir.path().join("iris_dims.csv").exists());
    let dims = fs::read_to_string(dir.path().join("iris_dims.csv")).unwrap();
    assert!(dims.starts_with("ClusterID,sepallength,sepalwidth,petallength,petalwidth\n"));
    assert!(dir.path().join("iris_objects.csv").exists());
    assert_eq!(read_clu(&dir.path().join("iris.clu"), 150, 4).unwrap().len(), 3);
}

#[test]
fn cluster_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let i = iris();
    let i = i.to_str().unwrap();
    let o = run(
        &["cluster", "--algo", "nosuch", "--in", i, "--out", "x.clu"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("clique, subclu, proclus, doc, fastdoc, mineclus"));
    let o = run(
        &[
            "cluster", "--algo", "clique", "--param", "xi=0", "--param", "tau=0.1", "--in", i, "--out", "x.clu",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("xi"));
    let o = run(
        &[
            "cluster", "--algo", "clique", "--param", "xi", "--in", i, "--out", "x.clu",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["cluster", "--algo", "subclu", "--in", i], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        &[
            "cluster",
            "--algo",
            "subclu",
            "--param",
            "eps=0.3",
            "--param",
            "min_pts=4",
            "--in",
            "missing.arff",
            "--out",
            "x.clu",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn evaluate_orders_and_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    generated(p);
    let base = [
        "evaluate",
        "--found",
        "truth.clu",
        "--truth",
        "truth.clu",
        "--data",
        "data.csv",
        "--measure",
    ];
    let o = run(&[&base[..], &["e4sc,ce"]].concat(), p);
    assert_eq!(stdout(&o), "e4sc=1.000000\nce=1.000000\n");
    let o = run(&[&base[..], &["ce,ce"]].concat(), p);
    assert_eq!(stdout(&o), "ce=1.000000\nce=1.000000\n");
    let o = run(&[&base[..], &["f1r", "--per-cluster"]].concat(), p);
    assert_eq!(
        stdout(&o),
        "f1r=1.000000\nf1r[0]=1.000000\nf1r[1]=1.000000\nf1r[2]=1.000000\n"
    );
    let o = run(&[&base[..], &["nmi"]].concat(), p);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evaluate_dimension_mismatch_names_both_values() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    generated(p);
    fs::write(p.join("wide.clu"), "1 0 0 0 0 0 1 1 2\n").unwrap();
    let o = run(
        &[
            "evaluate",
            "--found",
            "wide.clu",
            "--truth",
            "truth.clu",
            "--data",
            "data.csv",
            "--measure",
            "ce",
        ],
        p,
    );
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("d=7") && err.contains("d=6"), "{err}");
}

#[test]
fn evaluate_compare_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    generated(p);
    let o = run(
        &[
            "cluster",
            "--algo",
            "mineclus",
            "--param",
            "alpha=0.2",
            "--param",
            "beta=0.25",
            "--param",
            "w=0.1",
            "--param",
            "max_clusters=3",
            "--in",
            "data.csv",
            "--out",
            "m.clu",
        ],
        p,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for _ in 0..2 {
        let o = run(
            &[
                "evaluate",
                "--found",
                "m.clu",
                "--compare",
                "truth.clu",
                "--data",
                "data.csv",
                "--measure",
                "rnia,f1p",
                "--csv",
                "sweep.csv",
            ],
            p,
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let csv = fs::read_to_string(p.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "found,reference,rnia,f1p");
    assert!(lines[1].starts_with("m.clu,truth.clu,"));
    assert_eq!(lines[1], lines[2]);
    let both = run(
        &[
            "evaluate",
            "--found",
            "m.clu",
            "--truth",
            "truth.clu",
            "--compare",
            "truth.clu",
            "--data",
            "data.csv",
            "--measure",
            "ce",
        ],
        p,
    );
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn visualize_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    generated(p);
    let o = run(
        &[
            "visualize",
            "--data",
            "data.csv",
            "--clusters",
            "truth.clu",
            "--html",
            "out/t.html",
            "--matrix",
            "out/t.svg",
            "--show-unclustered",
        ],
        p,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let html = fs::read_to_string(p.join("out/t.html")).unwrap();
    assert_eq!(html.matches("<tr class=\"unclustered\"").count(), 10);
    let svg = fs::read_to_string(p.join("out/t.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    let o = run(&["visualize", "--data", "data.csv", "--clusters", "truth.clu"], p);
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        &[
            "visualize",
            "--data",
            "data.csv",
            "--clusters",
            "truth.clu",
            "--html",
            "x.html",
            "--palette",
            "#12",
        ],
        p,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pipeline_with_generator_source() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(
        p.join("run.json"),
        r#"{
  "source": {"generator": {"n_clustered": 450, "n_noise": 50, "d": 10, "k": 3, "dims_min": 3, "dims_max": 5}},
  "steps": [{"algorithm": "mineclus", "params": {"alpha": 0.2, "beta": 0.25, "w": 0.1, "max_clusters": 3}}],
  "measures": ["e4sc", "ce"],
  "outputs": {"clusters": "out/found.clu", "report": "out/report.txt", "html": "out/found.html", "matrix": "out/found.svg"},
  "seed": 7
}"#,
    )
    .unwrap();
    let o = run(&["pipeline", "--config", "run.json"], p);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let report: Vec<&str> = out.lines().skip_while(|l| *l != "report:").skip(1).collect();
    assert_eq!(report.len(), 2);
    assert!(report[0].starts_with("e4sc="));
    assert!(report[1].starts_with("ce="));
    assert_eq!(
        fs::read_to_string(p.join("out/report.txt")).unwrap(),
        format!("{}\n{}\n", report[0], report[1])
    );
    for f in ["found.clu", "found.html", "found.svg"] {
        assert!(p.join("out").join(f).exists(), "{f}");
    }
    let again = run(&["pipeline", "--config", "run.json"], p);
    assert_eq!(o.stdout, again.stdout);
    let other = run(&["pipeline", "--config", "run.json", "--seed", "8"], p);
    assert_ne!(o.stdout, other.stdout);
}

#[test]
fn pipeline_file_source() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let i = iris();
    fs::write(
        p.join("no_truth.json"),
        format!(
            r#"{{"source": {{"file": "{}"}}, "steps": [{{"algorithm": "proclus", "params": {{"k": 3, "l": 3}}}}], "measures": ["ce"]}}"#,
            i.display()
        ),
    )
    .unwrap();
    let o = run(&["pipeline", "--config", "no_truth.json"], p);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("truth required"));

    fs::write(
        p.join("plain.json"),
        format!(
            r#"{{"source": {{"file": "{}", "format": "arff"}}, "steps": [{{"algorithm": "proclus", "params": {{"k": 3, "l": 3}}}}]}}"#,
            i.display()
        ),
    )
    .unwrap();
    let o = run(&["pipeline", "--config", "plain.json", "--timings"], p);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("source: file iris.arff n=150 d=4\nstep 1: proclus, 3 clusters\n"));
    assert!(stderr(&o).contains("step 1 (proclus):"));

    fs::write(
        p.join("bad.json"),
        r#"{"source": {"file": "x.csv"}, "steps": [], "bogus": true}"#,
    )
    .unwrap();
    assert_eq!(run(&["pipeline", "--config", "bad.json"], p).status.code(), Some(2));
    fs::write(
        p.join("fails.json"),
        r#"{"source": {"generator": {"n_clustered": 4, "d": 3, "k": 1, "dims_min": 2, "dims_max": 2}},
            "steps": [{"algorithm": "proclus", "params": {"k": 9, "l": 2}}, {"algorithm": "clique", "params": {"xi": 2, "tau": 0.5}}],
            "outputs": {"clusters": "never.clu"}}"#,
    )
    .unwrap();
    let o = run(&["pipeline", "--config", "fails.json"], p);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("step 1"));
    assert!(!p.join("never.clu").exists());
}

#[test]
fn help_and_missing_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(run(&[], dir.path()).status.code(), Some(2));
}
