//! Grid-based bottom-up subspace clustering.
//!
//! Each dimension is cut into `xi` equal-width intervals over its observed
//! range. A unit (a grid cell restricted to a subspace) is dense when it holds
//! at least `ceil(tau * n)` objects. Dense units are found level by level,
//! joining (k-1)-dim units that agree on their first k-2 (dimension,
//! interval) pairs and pruning candidates with a non-dense projection.
//! Face-adjacent dense units of one subspace form a cluster.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{invalid, require_objects, sort_by_subspace, AlgoError};
use crate::model::{intersection_size, min_count, Clustering, Dataset, SubspaceCluster};

#[derive(Debug, Clone, PartialEq)]
pub struct CliqueParams {
    /// Intervals per dimension.
    pub xi: usize,
    /// Density threshold as a fraction of all objects.
    pub tau: f64,
}

impl CliqueParams {
    pub fn new(xi: usize, tau: f64) -> Result<Self, AlgoError> {
        if xi < 2 {
            return Err(invalid("xi", format!("must be >= 2, got {xi}")));
        }
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(invalid("tau", format!("must lie in (0, 1], got {tau}")));
        }
        Ok(Self { xi, tau })
    }
}

/// Interval boundaries of one dimension. A value equal to an interior
/// boundary belongs to the interval on its right; the maximum belongs to the
/// last interval; a zero-width dimension has a single interval.
#[derive(Debug, Clone)]
pub struct Grid {
    boundaries: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(data: &Dataset, xi: usize) -> Self {
        let boundaries = match data.bounds() {
            None => vec![Vec::new(); data.d()],
            Some(bounds) => bounds
                .into_iter()
                .map(|(lo, hi)| {
                    if hi > lo {
                        (1..xi).map(|t| lo + (hi - lo) * t as f64 / xi as f64).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect(),
        };
        Self { boundaries }
    }

    pub fn interval(&self, dim: usize, value: f64) -> usize {
        self.boundaries[dim].partition_point(|&b| b <= value)
    }
}

/// A dense unit: a cell in subspace `dims` (sorted) with one interval index
/// per dimension, and the objects it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseUnit {
    pub dims: Vec<usize>,
    pub intervals: Vec<usize>,
    pub objects: Vec<usize>,
}

type UnitKey = Vec<(usize, usize)>;

/// All dense units at every level, ordered by (level, dims, intervals).
pub fn dense_units(data: &Dataset, params: &CliqueParams) -> Result<Vec<DenseUnit>, AlgoError> {
    require_objects(data)?;
    let grid = Grid::new(data, params.xi);
    let threshold = min_count(params.tau, data.n()).max(1);

    let mut level: BTreeMap<UnitKey, Vec<usize>> = BTreeMap::new();
    for j in 0..data.d() {
        for i in 0..data.n() {
            level
                .entry(vec![(j, grid.interval(j, data.value(i, j)))])
                .or_default()
                .push(i);
        }
    }
    level.retain(|_, objs| objs.len() >= threshold);

    let mut all = Vec::new();
    while !level.is_empty() {
        let next = join_level(&level, threshold);
        all.extend(level.into_iter().map(|(key, objects)| DenseUnit {
            dims: key.iter().map(|p| p.0).collect(),
            intervals: key.iter().map(|p| p.1).collect(),
            objects,
        }));
        level = next;
    }
    all.sort_by(|a, b| (a.dims.len(), &a.dims, &a.intervals).cmp(&(b.dims.len(), &b.dims, &b.intervals)));
    Ok(all)
}

fn join_level(level: &BTreeMap<UnitKey, Vec<usize>>, threshold: usize) -> BTreeMap<UnitKey, Vec<usize>> {
    let keys: Vec<&UnitKey> = level.keys().collect();
    let mut next = BTreeMap::new();
    let mut start = 0;
    while start < keys.len() {
        let prefix = &keys[start][..keys[start].len() - 1];
        let mut end = start + 1;
        while end < keys.len() && &keys[end][..prefix.len()] == prefix {
            end += 1;
        }
        for a in start..end {
            for b in a + 1..end {
                let (la, lb) = (keys[a][prefix.len()], keys[b][prefix.len()]);
                if la.0 == lb.0 {
                    continue;
                }
                let mut cand = keys[a].clone();
                cand.push(lb);
                let all_dense = (0..cand.len() - 2).all(|drop| {
                    let mut sub = cand.clone();
                    sub.remove(drop);
                    level.contains_key(&sub)
                });
                if !all_dense {
                    continue;
                }
                let objects = intersect(&level[keys[a]], &level[keys[b]]);
                if objects.len() >= threshold {
                    next.insert(cand, objects);
                }
            }
        }
        start = end;
    }
    next
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(intersection_size(a, b));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Groups dense units of one subspace into face-connected components, in
/// discovery order when scanning units by ascending interval vector.
pub fn connected_components(units: &[&DenseUnit]) -> Vec<Vec<usize>> {
    let index: HashMap<&[usize], usize> = units
        .iter()
        .enumerate()
        .map(|(i, u)| (u.intervals.as_slice(), i))
        .collect();
    let mut order: Vec<usize> = (0..units.len()).collect();
    order.sort_by(|&a, &b| units[a].intervals.cmp(&units[b].intervals));
    let mut seen = vec![false; units.len()];
    let mut components = Vec::new();
    for &start in &order {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let mut probe = units[u].intervals.clone();
            for axis in 0..probe.len() {
                let orig = probe[axis];
                for neighbour in [orig.checked_sub(1), orig.checked_add(1)].into_iter().flatten() {
                    probe[axis] = neighbour;
                    if let Some(&v) = index.get(probe.as_slice()) {
                        if !seen[v] {
                            seen[v] = true;
                            comp.push(v);
                            queue.push_back(v);
                        }
                    }
                }
                probe[axis] = orig;
            }
        }
        components.push(comp);
    }
    components
}

pub fn run_clique(data: &Dataset, params: &CliqueParams) -> Result<Clustering, AlgoError> {
    let units = dense_units(data, params)?;
    let mut by_subspace: BTreeMap<&[usize], Vec<&DenseUnit>> = BTreeMap::new();
    for u in &units {
        by_subspace.entry(u.dims.as_slice()).or_default().push(u);
    }
    let mut clusters = Vec::new();
    for (dims, group) in by_subspace {
        for comp in connected_components(&group) {
            let objects: BTreeSet<usize> = comp.iter().flat_map(|&u| group[u].objects.iter().copied()).collect();
            clusters.push(SubspaceCluster::new(objects, dims.iter().copied()).expect("dense units are non-empty"));
        }
    }
    sort_by_subspace(&mut clusters);
    Ok(Clustering::new(clusters, data.n(), data.d()).expect("ids come from the dataset"))
}
