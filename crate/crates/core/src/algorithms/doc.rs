//! Monte-Carlo projective clustering (DOC) and its faster variant.
//!
//! A cluster is an axis-parallel box of half-width `w` around a seed point
//! `p` in its relevant dimensions `D`. Per round, `ceil(2/alpha)` random seeds
//! are tried; for each, `m` random discriminating sets `X` of `r` points vote
//! dimensions into `D` (those where every point of `X` lies within `w` of
//! `p`). The box's objects `C` qualify when `|C| >= alpha·n`, and the best box
//! maximizes `|C| · (1/beta)^|D|`. Rounds peel: accepted objects are removed
//! before the next round.

use super::{invalid, require_objects, AlgoError};
use crate::model::{min_count, Clustering, Dataset, SubspaceCluster};
use crate::rng::SeededRng;

/// Upper bound on the inner trials per seed point; the theoretical count
/// `(2/alpha)^r · ln 4` explodes for small `alpha` or large `d`.
pub const DEFAULT_MAX_INNER_TRIALS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DocParams {
    /// Minimum cluster size as a fraction of all objects.
    pub alpha: f64,
    /// Trade-off between cluster size and dimensionality.
    pub beta: f64,
    /// Half-width of a cluster box.
    pub w: f64,
    pub max_clusters: usize,
    pub seed: u64,
    pub max_inner_trials: usize,
}

impl DocParams {
    pub fn new(alpha: f64, beta: f64, w: f64, max_clusters: usize, seed: u64) -> Result<Self, AlgoError> {
        check_box_params(alpha, beta, w, max_clusters)?;
        Ok(Self {
            alpha,
            beta,
            w,
            max_clusters,
            seed,
            max_inner_trials: DEFAULT_MAX_INNER_TRIALS,
        })
    }

    pub fn with_max_inner_trials(mut self, cap: usize) -> Result<Self, AlgoError> {
        if cap == 0 {
            return Err(invalid("max_inner_trials", "must be >= 1"));
        }
        self.max_inner_trials = cap;
        Ok(self)
    }

    /// Size `r` of a discriminating set: `ceil(log(2d) / log(1/(2·beta)))`,
    /// at least 1 and at most `d` (the formula diverges at `beta = 0.5`).
    pub fn discriminating_set_size(&self, d: usize) -> usize {
        let raw = ((2.0 * d as f64).ln() / (1.0 / (2.0 * self.beta)).ln()).ceil();
        if raw.is_finite() {
            (raw as usize).clamp(1, d.max(1))
        } else {
            d.max(1)
        }
    }

    /// Inner trials per seed point: `ceil((2/alpha)^r · ln 4)`, capped.
    pub fn inner_trials(&self, d: usize) -> usize {
        let r = self.discriminating_set_size(d) as f64;
        let m = ((2.0 / self.alpha).powf(r) * 4f64.ln()).ceil();
        if m.is_finite() && m < self.max_inner_trials as f64 {
            m as usize
        } else {
            self.max_inner_trials
        }
    }
}

pub(crate) fn check_box_params(alpha: f64, beta: f64, w: f64, max_clusters: usize) -> Result<(), AlgoError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(beta > 0.0 && beta <= 0.5) {
        return Err(invalid("beta", format!("must lie in (0, 0.5], got {beta}")));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(invalid("w", format!("must be a positive finite width, got {w}")));
    }
    if max_clusters == 0 {
        return Err(invalid("max_clusters", "must be >= 1"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FastDocParams {
    pub doc: DocParams,
    /// A discriminating set with at least `d0` dimensions ends the round's search.
    pub d0: usize,
}

impl FastDocParams {
    pub fn new(doc: DocParams, d0: usize) -> Result<Self, AlgoError> {
        if d0 == 0 {
            return Err(invalid("d0", "must be >= 1"));
        }
        Ok(Self { doc, d0 })
    }
}

/// A box cluster with the seed point it was mined around.
#[derive(Debug, Clone, PartialEq)]
pub struct MinedCluster {
    pub objects: Vec<usize>,
    pub dims: Vec<usize>,
    pub seed_point: usize,
    /// `ln(|C|) + |D|·ln(1/beta)`, the log of the quality `|C|·(1/beta)^|D|`.
    pub quality: f64,
}

pub fn log_quality(size: usize, dims: usize, beta: f64) -> f64 {
    (size as f64).ln() + dims as f64 * (1.0 / beta).ln()
}

/// Dimensions in which every point of `xs` lies within `w` of `p`.
fn voted_dims(data: &Dataset, p: usize, xs: &[usize], w: f64) -> Vec<usize> {
    let prow = data.row(p);
    (0..data.d())
        .filter(|&j| xs.iter().all(|&x| (data.value(x, j) - prow[j]).abs() <= w))
        .collect()
}

/// Objects of `pool` inside the box of half-width `w` around `p` in `dims`.
pub(crate) fn box_members(data: &Dataset, pool: &[usize], p: usize, dims: &[usize], w: f64) -> Vec<usize> {
    let prow = data.row(p);
    pool.iter()
        .copied()
        .filter(|&q| {
            let qrow = data.row(q);
            dims.iter().all(|&j| (qrow[j] - prow[j]).abs() <= w)
        })
        .collect()
}

/// DOC's inner Monte-Carlo search around one seed point.
pub fn doc_search_from_seed(
    data: &Dataset,
    pool: &[usize],
    p: usize,
    params: &DocParams,
    min_size: usize,
    rng: &mut SeededRng,
) -> Option<MinedCluster> {
    let r = params.discriminating_set_size(data.d());
    let m = params.inner_trials(data.d());
    let mut best: Option<MinedCluster> = None;
    let mut xs = vec![0; r];
    for _ in 0..m {
        for x in &mut xs {
            *x = pool[rng.below(pool.len())];
        }
        let dims = voted_dims(data, p, &xs, params.w);
        if dims.is_empty() {
            continue;
        }
        let objects = box_members(data, pool, p, &dims, params.w);
        if objects.len() < min_size {
            continue;
        }
        let quality = log_quality(objects.len(), dims.len(), params.beta);
        if best.as_ref().is_none_or(|b| quality > b.quality) {
            best = Some(MinedCluster {
                objects,
                dims,
                seed_point: p,
                quality,
            });
        }
    }
    best
}

/// Greedy peeling: mine one cluster per round from the remaining objects,
/// remove its objects, stop at `max_clusters` or when a round finds nothing.
pub(crate) fn peel<F>(data: &Dataset, alpha: f64, max_clusters: usize, mut round: F) -> Vec<MinedCluster>
where
    F: FnMut(&[usize], usize) -> Option<MinedCluster>,
{
    let min_size = min_count(alpha, data.n()).max(1);
    let mut remaining: Vec<usize> = (0..data.n()).collect();
    let mut out = Vec::new();
    while out.len() < max_clusters && remaining.len() >= min_size {
        let Some(found) = round(&remaining, min_size) else {
            break;
        };
        remaining.retain(|o| found.objects.binary_search(o).is_err());
        out.push(found);
    }
    out
}

pub(crate) fn seeds_per_round(alpha: f64) -> usize {
    (2.0 / alpha).ceil() as usize
}

pub fn run_doc_traced(data: &Dataset, params: &DocParams) -> Result<Vec<MinedCluster>, AlgoError> {
    require_objects(data)?;
    let mut rng = SeededRng::new(params.seed);
    Ok(peel(data, params.alpha, params.max_clusters, |pool, min_size| {
        let mut best: Option<MinedCluster> = None;
        for _ in 0..seeds_per_round(params.alpha) {
            let p = pool[rng.below(pool.len())];
            if let Some(c) = doc_search_from_seed(data, pool, p, params, min_size, &mut rng) {
                if best.as_ref().is_none_or(|b| c.quality > b.quality) {
                    best = Some(c);
                }
            }
        }
        best
    }))
}

/// FastDOC: per round, keep the (seed, discriminating set) pair with the most
/// voted dimensions, stopping early once `d0` dimensions are reached, and
/// compute the box members only for that winner.
pub fn run_fastdoc_traced(data: &Dataset, params: &FastDocParams) -> Result<Vec<MinedCluster>, AlgoError> {
    require_objects(data)?;
    let doc = &params.doc;
    let mut rng = SeededRng::new(doc.seed);
    let r = doc.discriminating_set_size(data.d());
    let m = doc.inner_trials(data.d());
    Ok(peel(data, doc.alpha, doc.max_clusters, |pool, min_size| {
        let mut winner: Option<(usize, Vec<usize>)> = None;
        let mut xs = vec![0; r];
        'seeds: for _ in 0..seeds_per_round(doc.alpha) {
            let p = pool[rng.below(pool.len())];
            for _ in 0..m {
                for x in &mut xs {
                    *x = pool[rng.below(pool.len())];
                }
                let dims = voted_dims(data, p, &xs, doc.w);
                if winner.as_ref().is_none_or(|(_, best)| dims.len() > best.len()) {
                    let done = dims.len() >= params.d0;
                    winner = Some((p, dims));
                    if done {
                        break 'seeds;
                    }
                }
            }
        }
        let (p, dims) = winner?;
        if dims.is_empty() {
            return None;
        }
        let objects = box_members(data, pool, p, &dims, doc.w);
        (objects.len() >= min_size).then(|| MinedCluster {
            quality: log_quality(objects.len(), dims.len(), doc.beta),
            objects,
            dims,
            seed_point: p,
        })
    }))
}

pub(crate) fn to_clustering(data: &Dataset, mined: Vec<MinedCluster>) -> Clustering {
    let clusters = mined
        .into_iter()
        .map(|m| SubspaceCluster::new(m.objects, m.dims).expect("qualifying clusters are non-empty"))
        .collect();
    Clustering::new(clusters, data.n(), data.d()).expect("ids come from the dataset")
}

pub fn run_doc(data: &Dataset, params: &DocParams) -> Result<Clustering, AlgoError> {
    Ok(to_clustering(data, run_doc_traced(data, params)?))
}

pub fn run_fastdoc(data: &Dataset, params: &FastDocParams) -> Result<Clustering, AlgoError> {
    Ok(to_clustering(data, run_fastdoc_traced(data, params)?))
}
