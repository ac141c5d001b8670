//! External measures comparing a found clustering against a reference.
//!
//! Every score lies in `[0, 1]` with 1 best. Subspace-aware measures (CE,
//! RNIA, E4SC) count micro-objects, i.e. `(object, dim)` pairs; F1P, F1R
//! and Entropy look at object sets only.
//!
//! CE divides the matched intersection by the size of the micro-object
//! union counted with multiplicity: a micro-object covered by `a` found and
//! `b` reference clusters contributes `max(a, b)`. For micro-disjoint
//! clusterings this is the plain set union.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hungarian::max_weight_matching;
use crate::model::{intersection_size, Clustering, Dataset, SubspaceCluster};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("{what} mismatch: {left_name} has {left}, {right_name} has {right}")]
    DimensionMismatch {
        what: &'static str,
        left_name: &'static str,
        left: usize,
        right_name: &'static str,
        right: usize,
    },
    #[error("{measure} needs a reference clustering with at least one cluster")]
    EmptyReference { measure: Measure },
    #[error("unknown measure '{name}' (expected one of: ce, rnia, entropy, f1p, f1r, e4sc)")]
    UnknownMeasure { name: String },
    #[error("{measure} has no per-cluster form (expected one of: f1p, f1r, e4sc)")]
    NoPerCluster { measure: Measure },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Ce,
    Rnia,
    Entropy,
    F1p,
    F1r,
    E4sc,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Ce,
        Measure::Rnia,
        Measure::Entropy,
        Measure::F1p,
        Measure::F1r,
        Measure::E4sc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Ce => "ce",
            Measure::Rnia => "rnia",
            Measure::Entropy => "entropy",
            Measure::F1p => "f1p",
            Measure::F1r => "f1r",
            Measure::E4sc => "e4sc",
        }
    }

    pub fn supports_per_cluster(self) -> bool {
        matches!(self, Measure::F1p | Measure::F1r | Measure::E4sc)
    }

    pub fn eval(self, found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<f64, EvalError> {
        match self {
            Measure::Ce => eval_ce(found, reference, data),
            Measure::Rnia => eval_rnia(found, reference, data),
            Measure::Entropy => eval_entropy(found, reference, data),
            Measure::F1p => eval_f1p(found, reference, data),
            Measure::F1r => eval_f1r(found, reference, data),
            Measure::E4sc => eval_e4sc(found, reference, data),
        }
    }

    /// Parses a comma-separated list, keeping order and duplicates.
    pub fn parse_list(list: &str) -> Result<Vec<Measure>, EvalError> {
        list.split(',').map(|s| s.trim().parse()).collect()
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EvalError::UnknownMeasure { name: s.to_string() })
    }
}

fn check_shapes(found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<(), EvalError> {
    let pairs = [
        ("found", found.n(), found.d()),
        ("reference", reference.n(), reference.d()),
    ];
    for (name, n, d) in pairs {
        if d != data.d() {
            return Err(EvalError::DimensionMismatch {
                what: "dimensionality",
                left_name: name,
                left: d,
                right_name: "data",
                right: data.d(),
            });
        }
        if n != data.n() {
            return Err(EvalError::DimensionMismatch {
                what: "object count",
                left_name: name,
                left: n,
                right_name: "data",
                right: data.n(),
            });
        }
    }
    Ok(())
}

fn require_reference(measure: Measure, reference: &Clustering) -> Result<(), EvalError> {
    if reference.is_empty() {
        Err(EvalError::EmptyReference { measure })
    } else {
        Ok(())
    }
}

/// Intersection over union of the two micro-object sets.
pub fn eval_rnia(found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<f64, EvalError> {
    check_shapes(found, reference, data)?;
    let f = found.micro_union();
    let r = reference.micro_union();
    let union = f.union_len(&r);
    if union == 0 {
        return Ok(1.0);
    }
    Ok(f.intersection_len(&r) as f64 / union as f64)
}

/// Weight of the best one-to-one cluster matching, where a pair weighs its
/// shared micro-objects.
pub fn max_matching_overlap(found: &Clustering, reference: &Clustering) -> u64 {
    let weights: Vec<Vec<u64>> = found
        .clusters()
        .iter()
        .map(|a| reference.clusters().iter().map(|b| a.micro_overlap(b) as u64).collect())
        .collect();
    max_weight_matching(&weights).0
}

fn multiset_union_len(found: &Clustering, reference: &Clustering) -> usize {
    let mut counts: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (m, c) in found.micro_counts() {
        counts.entry(m).or_default().0 = c;
    }
    for (m, c) in reference.micro_counts() {
        counts.entry(m).or_default().1 = c;
    }
    counts.values().map(|&(a, b)| a.max(b)).sum()
}

pub fn eval_ce(found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<f64, EvalError> {
    check_shapes(found, reference, data)?;
    require_reference(Measure::Ce, reference)?;
    let d_max = max_matching_overlap(found, reference);
    let union = multiset_union_len(found, reference);
    Ok(d_max as f64 / union as f64)
}

fn object_f1(a: &SubspaceCluster, b: &SubspaceCluster) -> f64 {
    let shared = intersection_size(a.objects(), b.objects());
    (2 * shared) as f64 / (a.objects().len() + b.objects().len()) as f64
}

fn micro_f1(a: &SubspaceCluster, b: &SubspaceCluster) -> f64 {
    (2 * a.micro_overlap(b)) as f64 / (a.micro_size() + b.micro_size()) as f64
}

/// For each cluster of `side`, its best score against any cluster of `other`.
fn best_matches(
    side: &[SubspaceCluster],
    other: &[SubspaceCluster],
    score: fn(&SubspaceCluster, &SubspaceCluster) -> f64,
) -> Vec<f64> {
    side.iter()
        .map(|a| other.iter().map(|b| score(a, b)).fold(0.0, f64::max))
        .collect()
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

pub fn eval_f1p(found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<f64, EvalError> {
    check_shapes(found, reference, data)?;
    require_reference(Measure::F1p, reference)?;
    Ok(mean(&best_matches(found.clusters(), reference.clusters(), object_f1)))
}

pub fn eval_f1r(found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<f64, EvalError> {
    check_shapes(found, reference, data)?;
    require_reference(Measure::F1r, reference)?;
    Ok(mean(&best_matches(reference.clusters(), found.clusters(), object_f1)))
}

fn weighted_mean(clusters: &[SubspaceCluster], scores: &[f64]) -> f64 {
    let total: usize = clusters.iter().map(SubspaceCluster::micro_size).sum();
    if total == 0 {
        return 0.0;
    }
    let acc: f64 = clusters
        .iter()
        .zip(scores)
        .map(|(c, s)| c.micro_size() as f64 * s)
        .sum();
    acc / total as f64
}

/// Combines micro-object precision and recall into E4SC. This is the only
/// place the construction lives.
fn e4sc_combine(found: &[SubspaceCluster], reference: &[SubspaceCluster]) -> f64 {
    let s_pr = weighted_mean(found, &best_matches(found, reference, micro_f1));
    let s_re = weighted_mean(reference, &best_matches(reference, found, micro_f1));
    if s_pr == 0.0 || s_re == 0.0 {
        return 0.0;
    }
    2.0 * s_pr * s_re / (s_pr + s_re)
}

pub fn eval_e4sc(found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<f64, EvalError> {
    check_shapes(found, reference, data)?;
    require_reference(Measure::E4sc, reference)?;
    Ok(e4sc_combine(found.clusters(), reference.clusters()))
}

/// Reference label per object: index of the first reference cluster that
/// contains it, or `reference.len()` for noise.
fn reference_labels(reference: &Clustering) -> Vec<usize> {
    let noise = reference.len();
    let mut labels = vec![noise; reference.n()];
    for (ci, c) in reference.clusters().iter().enumerate().rev() {
        for &o in c.objects() {
            labels[o] = ci;
        }
    }
    labels
}

/// `1 - E / ln L`, where `E` is the size-weighted label entropy of the found
/// clusters and `L` the number of labels present over all objects. An empty
/// found clustering scores 0.
pub fn eval_entropy(found: &Clustering, reference: &Clustering, data: &Dataset) -> Result<f64, EvalError> {
    check_shapes(found, reference, data)?;
    if found.is_empty() {
        return Ok(0.0);
    }
    let labels = reference_labels(reference);
    let mut present = labels.clone();
    present.sort_unstable();
    present.dedup();
    if present.len() < 2 {
        return Ok(1.0);
    }

    let total: usize = found.clusters().iter().map(|c| c.objects().len()).sum();
    let mut e = 0.0;
    for c in found.clusters() {
        let size = c.objects().len();
        let mut hist = vec![0usize; reference.len() + 1];
        for &o in c.objects() {
            hist[labels[o]] += 1;
        }
        let h: f64 = hist
            .iter()
            .filter(|&&k| k > 0)
            .map(|&k| {
                let p = k as f64 / size as f64;
                -p * p.ln()
            })
            .sum();
        e += size as f64 / total as f64 * h;
    }
    Ok((1.0 - e / (present.len() as f64).ln()).clamp(0.0, 1.0))
}

/// Best-match scores per found cluster (F1P, E4SC) or per reference cluster
/// (F1R).
pub fn eval_per_cluster(
    measure: Measure,
    found: &Clustering,
    reference: &Clustering,
    data: &Dataset,
) -> Result<Vec<(usize, f64)>, EvalError> {
    check_shapes(found, reference, data)?;
    let scores = match measure {
        Measure::F1p => {
            require_reference(measure, reference)?;
            best_matches(found.clusters(), reference.clusters(), object_f1)
        }
        Measure::F1r => {
            require_reference(measure, reference)?;
            best_matches(reference.clusters(), found.clusters(), object_f1)
        }
        Measure::E4sc => {
            require_reference(measure, reference)?;
            best_matches(found.clusters(), reference.clusters(), micro_f1)
        }
        _ => return Err(EvalError::NoPerCluster { measure }),
    };
    Ok(scores.into_iter().enumerate().collect())
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvaluationReport {
    pub entries: Vec<(Measure, f64)>,
    pub per_cluster: Vec<(Measure, Vec<(usize, f64)>)>,
    pub warnings: Vec<String>,
}

impl EvaluationReport {
    /// Evaluates `measures` in order; duplicates are evaluated again.
    pub fn compute(
        measures: &[Measure],
        found: &Clustering,
        reference: &Clustering,
        data: &Dataset,
        per_cluster: bool,
    ) -> Result<Self, EvalError> {
        let mut report = EvaluationReport::default();
        for &m in measures {
            report.entries.push((m, m.eval(found, reference, data)?));
            if m == Measure::Entropy && found.is_empty() {
                let w = "entropy: found clustering is empty, score set to 0".to_string();
                if !report.warnings.contains(&w) {
                    report.warnings.push(w);
                }
            }
            if per_cluster && m.supports_per_cluster() {
                report
                    .per_cluster
                    .push((m, eval_per_cluster(m, found, reference, data)?));
            }
        }
        Ok(report)
    }

    pub fn value(&self, measure: Measure) -> Option<f64> {
        self.entries.iter().find(|(m, _)| *m == measure).map(|&(_, v)| v)
    }

    /// `name=value` lines, then `name[index]=value` lines for per-cluster
    /// results.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for (m, v) in &self.entries {
            out.push_str(&format!("{m}={v:.6}\n"));
        }
        for (m, scores) in &self.per_cluster {
            for (i, v) in scores {
                out.push_str(&format!("{m}[{i}]={v:.6}\n"));
            }
        }
        out
    }

    pub fn csv_header(&self) -> String {
        let names: Vec<&str> = self.entries.iter().map(|(m, _)| m.name()).collect();
        names.join(",")
    }

    pub fn csv_row(&self) -> String {
        let values: Vec<String> = self.entries.iter().map(|(_, v)| format!("{v:.6}")).collect();
        values.join(",")
    }
}
