//! Subspace clustering algorithms behind one contract: a [`Dataset`] in, a
//! [`Clustering`] out.
//!
//! Every randomized algorithm draws from a single [`SeededRng`](crate::rng::SeededRng)
//! built from its `seed` parameter, so equal (dataset, params, seed) give equal output.

pub mod clique;
pub mod dbscan;
pub mod doc;
pub mod mineclus;
pub mod proclus;
pub mod subclu;

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Clustering, Dataset};

pub use clique::{run_clique, CliqueParams};
pub use dbscan::run_dbscan;
pub use doc::{run_doc, run_fastdoc, DocParams, FastDocParams};
pub use mineclus::{run_mineclus, MineclusParams};
pub use proclus::{run_proclus, ProclusParams};
pub use subclu::{run_subclu, SubcluParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgoError {
    #[error("invalid parameter {param}: {reason}")]
    InvalidParams { param: &'static str, reason: String },
    #[error("insufficient data: {n} objects for {k} clusters")]
    InsufficientData { n: usize, k: usize },
    #[error("dataset has no objects")]
    EmptyDataset,
    #[error("unknown algorithm {name:?} (available: {})", ALGORITHM_NAMES.join(", "))]
    UnknownAlgorithm { name: String },
    #[error("unknown parameter {param:?} for {algorithm} (accepted: {})", accepted.join(", "))]
    UnknownParam {
        algorithm: &'static str,
        param: String,
        accepted: Vec<&'static str>,
    },
}

pub(crate) fn invalid(param: &'static str, reason: impl Into<String>) -> AlgoError {
    AlgoError::InvalidParams {
        param,
        reason: reason.into(),
    }
}

pub(crate) fn require_objects(data: &Dataset) -> Result<(), AlgoError> {
    if data.n() == 0 {
        Err(AlgoError::EmptyDataset)
    } else {
        Ok(())
    }
}

pub const ALGORITHM_NAMES: [&str; 6] = ["clique", "subclu", "proclus", "doc", "fastdoc", "mineclus"];

/// A fully parameterized algorithm, ready to run.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Clique(CliqueParams),
    Subclu(SubcluParams),
    Proclus(ProclusParams),
    Doc(DocParams),
    FastDoc(FastDocParams),
    Mineclus(MineclusParams),
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Clique(_) => "clique",
            Self::Subclu(_) => "subclu",
            Self::Proclus(_) => "proclus",
            Self::Doc(_) => "doc",
            Self::FastDoc(_) => "fastdoc",
            Self::Mineclus(_) => "mineclus",
        }
    }

    pub fn run(&self, data: &Dataset) -> Result<Clustering, AlgoError> {
        match self {
            Self::Clique(p) => run_clique(data, p),
            Self::Subclu(p) => run_subclu(data, p),
            Self::Proclus(p) => run_proclus(data, p),
            Self::Doc(p) => run_doc(data, p),
            Self::FastDoc(p) => run_fastdoc(data, p),
            Self::Mineclus(p) => run_mineclus(data, p),
        }
    }

    /// Builds an algorithm from textual `key=value` parameters. `seed` is
    /// used when the parameters do not carry their own `seed` entry and is
    /// ignored by deterministic algorithms.
    pub fn from_params(name: &str, params: &BTreeMap<String, String>, seed: u64) -> Result<Self, AlgoError> {
        let name = name.to_ascii_lowercase();
        let mut p = ParamReader::new(params);
        let algo = match name.as_str() {
            "clique" => {
                p.check("clique", &["xi", "tau"])?;
                Self::Clique(CliqueParams::new(p.req("xi")?, p.req("tau")?)?)
            }
            "subclu" => {
                p.check("subclu", &["eps", "min_pts"])?;
                Self::Subclu(SubcluParams::new(p.req("eps")?, p.req("min_pts")?)?)
            }
            "proclus" => {
                p.check(
                    "proclus",
                    &[
                        "k",
                        "l",
                        "seed",
                        "sample_factor",
                        "candidate_factor",
                        "patience",
                        "max_iterations",
                    ],
                )?;
                let mut params = ProclusParams::new(p.req("k")?, p.req("l")?, p.opt("seed")?.unwrap_or(seed))?;
                if let Some(a) = p.opt("sample_factor")? {
                    params = params.with_sample_factor(a)?;
                }
                if let Some(b) = p.opt("candidate_factor")? {
                    params = params.with_candidate_factor(b)?;
                }
                if let Some(pt) = p.opt("patience")? {
                    params = params.with_patience(pt)?;
                }
                if let Some(mi) = p.opt("max_iterations")? {
                    params = params.with_max_iterations(mi)?;
                }
                Self::Proclus(params)
            }
            "doc" | "fastdoc" => {
                let mut keys = vec!["alpha", "beta", "w", "max_clusters", "seed", "max_inner_trials"];
                if name == "fastdoc" {
                    keys.push("d0");
                }
                p.check(if name == "doc" { "doc" } else { "fastdoc" }, &keys)?;
                let mut doc = DocParams::new(
                    p.req("alpha")?,
                    p.req("beta")?,
                    p.req("w")?,
                    p.req("max_clusters")?,
                    p.opt("seed")?.unwrap_or(seed),
                )?;
                if let Some(cap) = p.opt("max_inner_trials")? {
                    doc = doc.with_max_inner_trials(cap)?;
                }
                if name == "doc" {
                    Self::Doc(doc)
                } else {
                    Self::FastDoc(FastDocParams::new(doc, p.req("d0")?)?)
                }
            }
            "mineclus" => {
                p.check("mineclus", &["alpha", "beta", "w", "max_clusters", "seed"])?;
                Self::Mineclus(MineclusParams::new(
                    p.req("alpha")?,
                    p.req("beta")?,
                    p.req("w")?,
                    p.req("max_clusters")?,
                    p.opt("seed")?.unwrap_or(seed),
                )?)
            }
            _ => return Err(AlgoError::UnknownAlgorithm { name }),
        };
        Ok(algo)
    }
}

struct ParamReader<'a> {
    params: &'a BTreeMap<String, String>,
}

impl<'a> ParamReader<'a> {
    fn new(params: &'a BTreeMap<String, String>) -> Self {
        Self { params }
    }

    fn check(&mut self, algorithm: &'static str, accepted: &[&'static str]) -> Result<(), AlgoError> {
        for key in self.params.keys() {
            if !accepted.contains(&key.as_str()) {
                return Err(AlgoError::UnknownParam {
                    algorithm,
                    param: key.clone(),
                    accepted: accepted.to_vec(),
                });
            }
        }
        Ok(())
    }

    fn opt<T: FromStr>(&self, key: &'static str) -> Result<Option<T>, AlgoError> {
        self.params
            .get(key)
            .map(|raw| {
                raw.trim()
                    .parse()
                    .map_err(|_| invalid(key, format!("cannot parse {raw:?}")))
            })
            .transpose()
    }

    fn req<T: FromStr>(&self, key: &'static str) -> Result<T, AlgoError> {
        self.opt(key)?.ok_or_else(|| invalid(key, "required"))
    }
}

/// Orders clusters by subspace size, then subspace, keeping discovery order
/// within a subspace.
pub(crate) fn sort_by_subspace(clusters: &mut [crate::model::SubspaceCluster]) {
    clusters.sort_by(|a, b| a.dims().len().cmp(&b.dims().len()).then_with(|| a.dims().cmp(b.dims())));
}
