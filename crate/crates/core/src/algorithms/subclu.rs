//! Bottom-up density-connected subspace clustering.
//!
//! Level 1 runs DBSCAN on every single dimension. A (k+1)-dim subspace is a
//! candidate only if all of its k-dim subspaces contain clusters; it is then
//! clustered by rerunning DBSCAN inside each cluster of the k-dim subspace
//! that covers the fewest objects.

use std::collections::BTreeMap;

use super::dbscan::{check_density_params, run_dbscan};
use super::{require_objects, AlgoError};
use crate::model::{Clustering, Dataset, SubspaceCluster};

#[derive(Debug, Clone, PartialEq)]
pub struct SubcluParams {
    pub eps: f64,
    pub min_pts: usize,
}

impl SubcluParams {
    pub fn new(eps: f64, min_pts: usize) -> Result<Self, AlgoError> {
        check_density_params(eps, min_pts)?;
        Ok(Self { eps, min_pts })
    }
}

/// A cluster together with the candidate set DBSCAN was run on to find it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedCluster {
    pub dims: Vec<usize>,
    pub objects: Vec<usize>,
    pub candidates: Vec<usize>,
}

/// Clusters at every level, ordered by (subspace size, subspace, discovery).
pub fn run_subclu_traced(data: &Dataset, params: &SubcluParams) -> Result<Vec<TracedCluster>, AlgoError> {
    require_objects(data)?;
    let all: Vec<usize> = (0..data.n()).collect();
    let mut out = Vec::new();

    let mut level: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    for j in 0..data.d() {
        let found = run_dbscan(data, &[j], &all, params.eps, params.min_pts)?;
        if !found.is_empty() {
            out.extend(found.iter().map(|objects| TracedCluster {
                dims: vec![j],
                objects: objects.clone(),
                candidates: all.clone(),
            }));
            level.insert(vec![j], found);
        }
    }

    while !level.is_empty() {
        let mut next: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        for subspace in candidate_subspaces(&level) {
            let parent = best_parent(&subspace, &level);
            let mut found = Vec::new();
            for seed_cluster in &level[&parent] {
                for objects in run_dbscan(data, &subspace, seed_cluster, params.eps, params.min_pts)? {
                    out.push(TracedCluster {
                        dims: subspace.clone(),
                        objects: objects.clone(),
                        candidates: seed_cluster.clone(),
                    });
                    found.push(objects);
                }
            }
            if !found.is_empty() {
                next.insert(subspace, found);
            }
        }
        level = next;
    }
    Ok(out)
}

/// Joins k-subspaces sharing their first k-1 dimensions, keeping candidates
/// whose every k-subset holds at least one cluster. Returned in lexicographic order.
fn candidate_subspaces(level: &BTreeMap<Vec<usize>, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    let keys: Vec<&Vec<usize>> = level.keys().collect();
    let mut out = Vec::new();
    for (a, ka) in keys.iter().enumerate() {
        let prefix = &ka[..ka.len() - 1];
        for kb in keys[a + 1..].iter().take_while(|kb| &kb[..prefix.len()] == prefix) {
            let mut cand = (*ka).clone();
            cand.push(kb[prefix.len()]);
            if (0..cand.len() - 2).all(|drop| {
                let mut sub = cand.clone();
                sub.remove(drop);
                level.contains_key(&sub)
            }) {
                out.push(cand);
            }
        }
    }
    out
}

/// The k-subset of `subspace` whose clusters hold the fewest objects in
/// total; ties go to the lexicographically smallest subset.
fn best_parent(subspace: &[usize], level: &BTreeMap<Vec<usize>, Vec<Vec<usize>>>) -> Vec<usize> {
    let mut subsets: Vec<Vec<usize>> = (0..subspace.len())
        .map(|drop| {
            let mut s = subspace.to_vec();
            s.remove(drop);
            s
        })
        .collect();
    subsets.sort();
    subsets
        .into_iter()
        .min_by_key(|s| level[s].iter().map(Vec::len).sum::<usize>())
        .expect("subspace has at least two dimensions")
}

pub fn run_subclu(data: &Dataset, params: &SubcluParams) -> Result<Clustering, AlgoError> {
    let clusters = run_subclu_traced(data, params)?
        .into_iter()
        .map(|t| SubspaceCluster::new(t.objects, t.dims).expect("DBSCAN clusters are non-empty"))
        .collect();
    Ok(Clustering::new(clusters, data.n(), data.d()).expect("ids come from the dataset"))
}
