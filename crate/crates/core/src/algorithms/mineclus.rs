//! DOC-style box clustering with the Monte-Carlo search replaced by exact
//! frequent-itemset mining.
//!
//! For a seed point `p`, object `q` contributes the itemset of dimensions
//! where it lies within `w` of `p`. Every itemset whose support reaches
//! `ceil(alpha·n)` is a candidate box; the one maximizing
//! `support · (1/beta)^|itemset|` wins. Mining is levelwise (apriori) over
//! vertical tid bitsets.

use std::collections::HashSet;

use super::doc::{check_box_params, log_quality, peel, seeds_per_round, to_clustering, MinedCluster};
use super::{require_objects, AlgoError};
use crate::model::{Clustering, Dataset};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq)]
pub struct MineclusParams {
    pub alpha: f64,
    pub beta: f64,
    pub w: f64,
    pub max_clusters: usize,
    pub seed: u64,
}

impl MineclusParams {
    pub fn new(alpha: f64, beta: f64, w: f64, max_clusters: usize, seed: u64) -> Result<Self, AlgoError> {
        check_box_params(alpha, beta, w, max_clusters)?;
        Ok(Self {
            alpha,
            beta,
            w,
            max_clusters,
            seed,
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
struct TidSet(Vec<u64>);

impl TidSet {
    fn empty(len: usize) -> Self {
        Self(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &TidSet) -> TidSet {
        TidSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(wi, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| wi * 64 + b))
    }
}

/// Best box around seed `p` over `pool`, by exhaustive levelwise mining.
pub fn mine_from_seed(
    data: &Dataset,
    pool: &[usize],
    p: usize,
    beta: f64,
    w: f64,
    min_size: usize,
) -> Option<MinedCluster> {
    let prow = data.row(p);
    let mut level: Vec<(Vec<usize>, TidSet)> = (0..data.d())
        .filter_map(|j| {
            let mut tids = TidSet::empty(pool.len());
            for (t, &q) in pool.iter().enumerate() {
                if (data.value(q, j) - prow[j]).abs() <= w {
                    tids.insert(t);
                }
            }
            (tids.count() >= min_size).then_some((vec![j], tids))
        })
        .collect();

    let mut best: Option<(f64, Vec<usize>, TidSet)> = None;
    while !level.is_empty() {
        for (items, tids) in &level {
            let q = log_quality(tids.count(), items.len(), beta);
            if best.as_ref().is_none_or(|b| q > b.0) {
                best = Some((q, items.clone(), tids.clone()));
            }
        }
        level = next_level(&level, min_size);
    }

    best.map(|(quality, dims, tids)| MinedCluster {
        objects: tids.members().map(|t| pool[t]).collect(),
        dims,
        seed_point: p,
        quality,
    })
}

fn next_level(level: &[(Vec<usize>, TidSet)], min_size: usize) -> Vec<(Vec<usize>, TidSet)> {
    let known: HashSet<&[usize]> = level.iter().map(|(items, _)| items.as_slice()).collect();
    let mut next = Vec::new();
    for (a, (ia, ta)) in level.iter().enumerate() {
        let prefix = &ia[..ia.len() - 1];
        for (ib, tb) in level[a + 1..]
            .iter()
            .take_while(|(ib, _)| &ib[..prefix.len()] == prefix)
        {
            let mut cand = ia.clone();
            cand.push(ib[prefix.len()]);
            let closed = (0..cand.len() - 2).all(|drop| {
                let mut sub = cand.clone();
                sub.remove(drop);
                known.contains(sub.as_slice())
            });
            if !closed {
                continue;
            }
            let tids = ta.and(tb);
            if tids.count() >= min_size {
                next.push((cand, tids));
            }
        }
    }
    next
}

pub fn run_mineclus_traced(data: &Dataset, params: &MineclusParams) -> Result<Vec<MinedCluster>, AlgoError> {
    require_objects(data)?;
    let mut rng = SeededRng::new(params.seed);
    Ok(peel(data, params.alpha, params.max_clusters, |pool, min_size| {
        let mut best: Option<MinedCluster> = None;
        for _ in 0..seeds_per_round(params.alpha) {
            let p = pool[rng.below(pool.len())];
            if let Some(c) = mine_from_seed(data, pool, p, params.beta, params.w, min_size) {
                if best.as_ref().is_none_or(|b| c.quality > b.quality) {
                    best = Some(c);
                }
            }
        }
        best
    }))
}

pub fn run_mineclus(data: &Dataset, params: &MineclusParams) -> Result<Clustering, AlgoError> {
    Ok(to_clustering(data, run_mineclus_traced(data, params)?))
}
