//! Density-based clustering restricted to a subspace and a candidate set.

use std::collections::VecDeque;

use super::{invalid, AlgoError};
use crate::model::Dataset;

pub(crate) fn check_density_params(eps: f64, min_pts: usize) -> Result<(), AlgoError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(invalid("eps", format!("must be > 0, got {eps}")));
    }
    if min_pts == 0 {
        return Err(invalid("min_pts", "must be >= 1"));
    }
    Ok(())
}

/// Euclidean DBSCAN over `candidates`, measuring distance only in `subspace`.
///
/// A point is core when at least `min_pts` candidates (itself included) lie
/// within `eps`. Points are visited in ascending id order, so a border point
/// reachable from several clusters joins the one discovered first. Noise is
/// omitted. Each returned cluster is sorted; clusters come in discovery order.
pub fn run_dbscan(
    data: &Dataset,
    subspace: &[usize],
    candidates: &[usize],
    eps: f64,
    min_pts: usize,
) -> Result<Vec<Vec<usize>>, AlgoError> {
    if subspace.is_empty() {
        return Err(invalid("subspace", "must not be empty"));
    }
    if let Some(&j) = subspace.iter().find(|&&j| j >= data.d()) {
        return Err(invalid("subspace", format!("dimension {j} out of range")));
    }
    check_density_params(eps, min_pts)?;

    let mut points: Vec<usize> = candidates.to_vec();
    points.sort_unstable();
    points.dedup();
    let eps_sq = eps * eps;

    let neighbours = |p: usize| -> Vec<usize> {
        let a = data.row(points[p]);
        (0..points.len())
            .filter(|&q| {
                let b = data.row(points[q]);
                let dist_sq: f64 = subspace.iter().map(|&j| (a[j] - b[j]).powi(2)).sum();
                dist_sq <= eps_sq
            })
            .collect()
    };

    let mut label: Vec<Option<usize>> = vec![None; points.len()];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for p in 0..points.len() {
        if label[p].is_some() {
            continue;
        }
        let seeds = neighbours(p);
        if seeds.len() < min_pts {
            continue;
        }
        let c = clusters.len();
        let mut members = Vec::new();
        label[p] = Some(c);
        members.push(points[p]);
        let mut queue: VecDeque<usize> = seeds.into_iter().filter(|&q| q != p).collect();
        while let Some(q) = queue.pop_front() {
            if label[q].is_some() {
                continue;
            }
            label[q] = Some(c);
            members.push(points[q]);
            let nq = neighbours(q);
            if nq.len() >= min_pts {
                queue.extend(nq.into_iter().filter(|&r| label[r].is_none()));
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    Ok(clusters)
}
