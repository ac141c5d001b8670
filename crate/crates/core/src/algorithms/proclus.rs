//! Projected k-medoid clustering with per-cluster dimension selection.
//!
//! Three phases:
//!
//! 1. **Initialization.** Draw a random sample of `min(n, A·k)` objects and
//!    greedily pick `min(sample, B·k)` well-scattered candidates, starting at
//!    the lowest sampled id and repeatedly taking the sample point farthest
//!    from all candidates chosen so far.
//! 2. **Iteration.** Starting from `k` random candidates as medoids, compute
//!    each medoid's locality (points within the distance to its nearest
//!    fellow medoid), choose `k·l` dimensions by standardized average
//!    deviation (at least two per medoid), assign every object to the
//!    medoid with the smallest Manhattan segmental distance, and score the
//!    assignment by the mean distance. The best state so far is kept; the
//!    next state replaces the medoid of the best state's smallest cluster
//!    with a random unused candidate. The loop stops after `patience`
//!    consecutive non-improving states.
//! 3. **Refinement.** Dimensions are recomputed from the best clusters'
//!    members, objects are reassigned once, and objects farther from their
//!    medoid than its sphere of influence become outliers.
//!
//! Full-space distances (greedy scattering, localities) use the Manhattan
//! segmental distance over all dimensions.

use super::{invalid, require_objects, AlgoError};
use crate::model::{Clustering, Dataset, SubspaceCluster};
use crate::rng::SeededRng;

pub const DEFAULT_SAMPLE_FACTOR: usize = 30;
pub const DEFAULT_CANDIDATE_FACTOR: usize = 3;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ProclusParams {
    /// Number of clusters.
    pub k: usize,
    /// Average number of dimensions per cluster.
    pub l: usize,
    pub seed: u64,
    /// `A`: the random sample holds `A·k` objects.
    pub sample_factor: usize,
    /// `B`: `B·k` medoid candidates are scattered out of the sample.
    pub candidate_factor: usize,
    /// Consecutive non-improving iterations before stopping; `None` means `max(20, 5·k)`.
    pub patience: Option<usize>,
    /// Hard cap on iterations.
    pub max_iterations: usize,
}

impl ProclusParams {
    pub fn new(k: usize, l: usize, seed: u64) -> Result<Self, AlgoError> {
        if k == 0 {
            return Err(invalid("k", "must be >= 1"));
        }
        if l < 2 {
            return Err(invalid("l", format!("must be >= 2, got {l}")));
        }
        Ok(Self {
            k,
            l,
            seed,
            sample_factor: DEFAULT_SAMPLE_FACTOR,
            candidate_factor: DEFAULT_CANDIDATE_FACTOR,
            patience: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        })
    }

    pub fn with_sample_factor(mut self, a: usize) -> Result<Self, AlgoError> {
        if a == 0 {
            return Err(invalid("sample_factor", "must be >= 1"));
        }
        self.sample_factor = a;
        Ok(self)
    }

    pub fn with_candidate_factor(mut self, b: usize) -> Result<Self, AlgoError> {
        if b == 0 {
            return Err(invalid("candidate_factor", "must be >= 1"));
        }
        self.candidate_factor = b;
        Ok(self)
    }

    pub fn with_patience(mut self, patience: usize) -> Result<Self, AlgoError> {
        if patience == 0 {
            return Err(invalid("patience", "must be >= 1"));
        }
        self.patience = Some(patience);
        Ok(self)
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Result<Self, AlgoError> {
        if max_iterations == 0 {
            return Err(invalid("max_iterations", "must be >= 1"));
        }
        self.max_iterations = max_iterations;
        Ok(self)
    }

    fn effective_patience(&self) -> usize {
        self.patience.unwrap_or_else(|| (5 * self.k).max(20))
    }
}

/// Diagnostics from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProclusTrace {
    /// Object ids of the medoid candidates after greedy scattering.
    pub candidates: Vec<usize>,
    /// Objective of every evaluated state, in order.
    pub objectives: Vec<f64>,
    /// Objectives of the states that became the new best.
    pub accepted: Vec<f64>,
    /// Objective of the state the refinement started from.
    pub best_objective: f64,
    /// Medoid object ids of the best state.
    pub medoids: Vec<usize>,
    /// Dimension sets after refinement, one per medoid.
    pub dims: Vec<Vec<usize>>,
    /// Number of objects discarded as outliers.
    pub outliers: usize,
}

struct State {
    medoids: Vec<usize>,
    assignment: Vec<usize>,
    sizes: Vec<usize>,
    objective: f64,
}

fn full_distance(data: &Dataset, a: usize, b: usize) -> f64 {
    let (ra, rb) = (data.row(a), data.row(b));
    ra.iter().zip(rb).map(|(x, y)| (x - y).abs()).sum::<f64>() / ra.len() as f64
}

/// Manhattan distance over `dims`, divided by `|dims|`.
pub fn segmental_distance(a: &[f64], b: &[f64], dims: &[usize]) -> f64 {
    dims.iter().map(|&j| (a[j] - b[j]).abs()).sum::<f64>() / dims.len() as f64
}

fn greedy_scatter(data: &Dataset, sample: &[usize], count: usize) -> Vec<usize> {
    let mut chosen = vec![sample[0]];
    let mut nearest: Vec<f64> = sample.iter().map(|&s| full_distance(data, s, sample[0])).collect();
    while chosen.len() < count {
        let mut best = 0;
        for (i, &dist) in nearest.iter().enumerate() {
            if dist > nearest[best] {
                best = i;
            }
        }
        let pick = sample[best];
        chosen.push(pick);
        for (slot, &s) in nearest.iter_mut().zip(sample) {
            *slot = slot.min(full_distance(data, s, pick));
        }
    }
    chosen
}

/// Chooses `k·l` dimensions, at least two per medoid, by ascending z-score
/// of the mean per-dimension deviation of each group from its medoid.
fn find_dimensions(data: &Dataset, medoids: &[usize], groups: &[Vec<usize>], l: usize) -> Vec<Vec<usize>> {
    let d = data.d();
    let k = medoids.len();
    let mut z = vec![vec![0.0; d]; k];
    for (i, (&m, group)) in medoids.iter().zip(groups).enumerate() {
        let mrow = data.row(m);
        let members: &[usize] = if group.is_empty() {
            std::slice::from_ref(&medoids[i])
        } else {
            group
        };
        let mut x = vec![0.0; d];
        for &p in members {
            for (xj, (a, b)) in x.iter_mut().zip(data.row(p).iter().zip(mrow)) {
                *xj += (a - b).abs();
            }
        }
        for xj in &mut x {
            *xj /= members.len() as f64;
        }
        let mean = x.iter().sum::<f64>() / d as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (d - 1).max(1) as f64;
        let sd = var.sqrt();
        for j in 0..d {
            z[i][j] = if sd > 0.0 { (x[j] - mean) / sd } else { 0.0 };
        }
    }

    let by_z = |a: &(usize, usize), b: &(usize, usize)| z[a.0][a.1].total_cmp(&z[b.0][b.1]).then(a.cmp(b));
    let mut dims: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut taken = vec![vec![false; d]; k];
    for i in 0..k {
        let mut own: Vec<(usize, usize)> = (0..d).map(|j| (i, j)).collect();
        own.sort_by(by_z);
        for &(_, j) in own.iter().take(2) {
            dims[i].push(j);
            taken[i][j] = true;
        }
    }
    let mut pool: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| !taken[i][j])
        .collect();
    pool.sort_by(by_z);
    for &(i, j) in pool.iter().take(k * l - 2 * k) {
        dims[i].push(j);
    }
    for ds in &mut dims {
        ds.sort_unstable();
    }
    dims
}

fn assign(data: &Dataset, medoids: &[usize], dims: &[Vec<usize>]) -> (Vec<usize>, Vec<f64>) {
    let mut assignment = Vec::with_capacity(data.n());
    let mut distances = Vec::with_capacity(data.n());
    for p in 0..data.n() {
        let row = data.row(p);
        let (best, dist) = medoids
            .iter()
            .zip(dims)
            .map(|(&m, ds)| segmental_distance(row, data.row(m), ds))
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, dist)| if dist < acc.1 { (i, dist) } else { acc },
            );
        assignment.push(best);
        distances.push(dist);
    }
    (assignment, distances)
}

fn groups_of(assignment: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); k];
    for (p, &i) in assignment.iter().enumerate() {
        groups[i].push(p);
    }
    groups
}

pub fn run_proclus_traced(data: &Dataset, params: &ProclusParams) -> Result<(Clustering, ProclusTrace), AlgoError> {
    require_objects(data)?;
    let (n, d, k, l) = (data.n(), data.d(), params.k, params.l);
    if n < k {
        return Err(AlgoError::InsufficientData { n, k });
    }
    if l > d {
        return Err(invalid("l", format!("must be <= d = {d}, got {l}")));
    }
    let mut rng = SeededRng::new(params.seed);

    let mut sample = rng.sample_indices(n, params.sample_factor.saturating_mul(k));
    sample.sort_unstable();
    let candidates = greedy_scatter(
        data,
        &sample,
        (params.candidate_factor.saturating_mul(k)).min(sample.len()).max(k),
    );

    let mut current: Vec<usize> = rng
        .sample_indices(candidates.len(), k)
        .into_iter()
        .map(|i| candidates[i])
        .collect();
    let patience = params.effective_patience();
    let mut best: Option<State> = None;
    let mut objectives = Vec::new();
    let mut accepted = Vec::new();
    let mut stale = 0;

    for _ in 0..params.max_iterations {
        let localities = localities(data, &current, &sample);
        let dims = find_dimensions(data, &current, &localities, l);
        let (assignment, distances) = assign(data, &current, &dims);
        let objective = distances.iter().sum::<f64>() / n as f64;
        objectives.push(objective);

        if best.as_ref().is_none_or(|b| objective < b.objective) {
            let mut sizes = vec![0; k];
            for &i in &assignment {
                sizes[i] += 1;
            }
            best = Some(State {
                medoids: current.clone(),
                assignment,
                sizes,
                objective,
            });
            accepted.push(objective);
            stale = 0;
        } else {
            stale += 1;
            if stale >= patience {
                break;
            }
        }

        let b = best.as_ref().expect("set above");
        let unused: Vec<usize> = candidates.iter().copied().filter(|c| !b.medoids.contains(c)).collect();
        if unused.is_empty() {
            break;
        }
        let smallest = (0..k).min_by_key(|&i| (b.sizes[i], i)).expect("k >= 1");
        current = b.medoids.clone();
        current[smallest] = unused[rng.below(unused.len())];
    }

    let best = best.expect("at least one iteration");
    let medoids = best.medoids;
    let dims = find_dimensions(data, &medoids, &groups_of(&best.assignment, k), l);
    let (assignment, distances) = assign(data, &medoids, &dims);
    let spheres: Vec<f64> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i)
                .map(|j| segmental_distance(data.row(medoids[i]), data.row(medoids[j]), &dims[i]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();

    let mut members = vec![Vec::new(); k];
    let mut outliers = 0;
    for p in 0..n {
        let i = assignment[p];
        if distances[p] > spheres[i] {
            outliers += 1;
        } else {
            members[i].push(p);
        }
    }
    let clusters = members
        .into_iter()
        .zip(&dims)
        .filter(|(m, _)| !m.is_empty())
        .map(|(m, ds)| SubspaceCluster::new(m, ds.iter().copied()).expect("non-empty"))
        .collect();
    let clustering = Clustering::new(clusters, n, d).expect("ids come from the dataset");
    let trace = ProclusTrace {
        candidates,
        objectives,
        accepted,
        best_objective: best.objective,
        medoids,
        dims,
        outliers,
    };
    Ok((clustering, trace))
}

/// Points within each medoid's distance to its nearest fellow medoid. With a
/// single medoid the radius is its largest distance to any sample point.
fn localities(data: &Dataset, medoids: &[usize], sample: &[usize]) -> Vec<Vec<usize>> {
    medoids
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let radius = if medoids.len() == 1 {
                sample.iter().map(|&s| full_distance(data, m, s)).fold(0.0, f64::max)
            } else {
                medoids
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &o)| full_distance(data, m, o))
                    .fold(f64::INFINITY, f64::min)
            };
            (0..data.n()).filter(|&p| full_distance(data, m, p) <= radius).collect()
        })
        .collect()
}

pub fn run_proclus(data: &Dataset, params: &ProclusParams) -> Result<Clustering, AlgoError> {
    run_proclus_traced(data, params).map(|(c, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs() -> Dataset {
        let mut rng = SeededRng::new(1);
        let mut rows = Vec::new();
        for i in 0..60 {
            let mut r: Vec<f64> = (0..5).map(|_| rng.uniform()).collect();
            if i < 30 {
                r[0] = 0.2 + 0.02 * rng.uniform();
                r[1] = 0.7 + 0.02 * rng.uniform();
            } else {
                r[3] = 0.5 + 0.02 * rng.uniform();
                r[4] = 0.1 + 0.02 * rng.uniform();
            }
            rows.push(r);
        }
        Dataset::from_rows(rows, 5).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ProclusParams::new(0, 2, 0).is_err());
        assert!(ProclusParams::new(2, 1, 0).is_err());
        let ds = Dataset::from_rows(vec![vec![0.0, 1.0]], 2).unwrap();
        assert_eq!(
            run_proclus(&ds, &ProclusParams::new(2, 2, 0).unwrap()).unwrap_err(),
            AlgoError::InsufficientData { n: 1, k: 2 }
        );
        assert!(run_proclus(&ds, &ProclusParams::new(1, 3, 0).unwrap()).is_err());
    }

    #[test]
    fn single_medoid_keeps_everything() {
        let ds = two_blobs();
        let (c, trace) = run_proclus_traced(&ds, &ProclusParams::new(1, 5, 3).unwrap()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.clusters()[0].objects().len(), 60);
        assert_eq!(c.clusters()[0].dims(), &[0, 1, 2, 3, 4]);
        assert_eq!(trace.outliers, 0);
    }

    #[test]
    fn finds_the_two_blobs() {
        let ds = two_blobs();
        let (c, trace) = run_proclus_traced(&ds, &ProclusParams::new(2, 2, 5).unwrap()).unwrap();
        assert_eq!(trace.dims.iter().map(Vec::len).sum::<usize>(), 4);
        let mut dims: Vec<&[usize]> = c.clusters().iter().map(|cl| cl.dims()).collect();
        dims.sort();
        assert_eq!(dims, vec![&[0, 1][..], &[3, 4]]);
        for cl in c.clusters() {
            let first_half = cl.objects().iter().filter(|&&o| o < 30).count();
            assert!(first_half == cl.objects().len() || first_half == 0);
        }
    }

    #[test]
    fn best_objective_bounds_accepted_states() {
        let ds = two_blobs();
        let (_, trace) = run_proclus_traced(&ds, &ProclusParams::new(3, 2, 8).unwrap()).unwrap();
        assert!(trace.accepted.iter().all(|&o| trace.best_objective <= o));
        assert!(trace.objectives.iter().all(|&o| trace.best_objective <= o));
        assert!(trace.dims.iter().all(|ds| ds.len() >= 2));
        assert_eq!(trace.dims.iter().map(Vec::len).sum::<usize>(), 6);
    }

    #[test]
    fn deterministic_under_seed() {
        let ds = two_blobs();
        let p = ProclusParams::new(2, 3, 77).unwrap();
        assert_eq!(run_proclus(&ds, &p).unwrap(), run_proclus(&ds, &p).unwrap());
    }
}
