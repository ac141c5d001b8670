//! Synthetic data with hidden subspace clusters and its ground truth.
//!
//! Each cluster gets a random relevant subspace and a center drawn from the
//! value box shrunk by `extent` along the relevant dimensions. Members are
//! drawn around the center in relevant dimensions (uniform box or truncated
//! gaussian with `sigma = extent / 2`) and uniformly over the value range in
//! all other dimensions. Noise objects are uniform everywhere. Rows are
//! shuffled once and the ground truth refers to post-shuffle ids.
//!
//! Draw order (pinned, so equal specs give equal output): per cluster the
//! subspace size, the subspace, the center; then cluster members cluster by
//! cluster, row-major; then noise rows; then the shuffle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{default_dim_names, Clustering, Dataset, SubspaceCluster};
use crate::rng::{SeededRng, DEFAULT_SEED};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid generator spec: {field}: {reason}")]
pub struct InvalidSpec {
    pub field: &'static str,
    pub reason: String,
}

fn bad(field: &'static str, reason: impl Into<String>) -> InvalidSpec {
    InvalidSpec {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ClusterModel {
    #[default]
    #[serde(rename = "uniform-box")]
    UniformBox,
    #[serde(rename = "gaussian")]
    Gaussian,
}

fn default_extent() -> f64 {
    0.05
}

fn default_range() -> [f64; 2] {
    [0.0, 1.0]
}

/// Full parameterization of a synthetic dataset. Serializes as a flat
/// key-value document; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub n_clustered: usize,
    #[serde(default)]
    pub n_noise: usize,
    pub d: usize,
    pub k: usize,
    pub dims_min: usize,
    pub dims_max: usize,
    /// Relative cluster sizes; equal when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_weights: Option<Vec<f64>>,
    /// Half-width of a cluster along a relevant dimension.
    #[serde(default = "default_extent")]
    pub extent: f64,
    /// `[min, max]` of every dimension.
    #[serde(default = "default_range")]
    pub value_range: [f64; 2],
    #[serde(default)]
    pub model: ClusterModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GeneratorSpec {
    /// Equal-weight uniform-box spec over `[0, 1]` with default extent.
    pub fn new(
        n_clustered: usize,
        n_noise: usize,
        d: usize,
        k: usize,
        dims_min: usize,
        dims_max: usize,
        seed: u64,
    ) -> Self {
        Self {
            n_clustered,
            n_noise,
            d,
            k,
            dims_min,
            dims_max,
            size_weights: None,
            extent: default_extent(),
            value_range: default_range(),
            model: ClusterModel::UniformBox,
            seed: Some(seed),
        }
    }

    pub fn validate(&self) -> Result<(), InvalidSpec> {
        if self.d == 0 {
            return Err(bad("d", "must be >= 1"));
        }
        if self.k == 0 {
            return Err(bad("k", "must be >= 1"));
        }
        if self.n_clustered < self.k {
            return Err(bad("n_clustered", format!("must be >= k = {}", self.k)));
        }
        if self.dims_min < 2 {
            return Err(bad("dims_min", "must be >= 2"));
        }
        if self.dims_min > self.dims_max {
            return Err(bad(
                "dims_min",
                format!("{} exceeds dims_max = {}", self.dims_min, self.dims_max),
            ));
        }
        if self.dims_max > self.d {
            return Err(bad("dims_max", format!("{} exceeds d = {}", self.dims_max, self.d)));
        }
        let [lo, hi] = self.value_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(bad("value_range", "needs finite bounds with min < max"));
        }
        if !(self.extent > 0.0 && self.extent < 0.5 * (hi - lo)) {
            return Err(bad("extent", "must lie in (0, half the range width)"));
        }
        if let Some(w) = &self.size_weights {
            if w.len() != self.k {
                return Err(bad("size_weights", format!("{} weights for k = {}", w.len(), self.k)));
            }
            if w.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(bad("size_weights", "weights must be positive and finite"));
            }
            if self.cluster_sizes().contains(&0) {
                return Err(bad("size_weights", "a cluster would receive no objects"));
            }
        }
        Ok(())
    }

    /// Largest-remainder apportionment of `n_clustered` over the weights;
    /// remainder ties go to the lower cluster index.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let weights = self.size_weights.clone().unwrap_or_else(|| vec![1.0; self.k]);
        let total: f64 = weights.iter().sum();
        let quotas: Vec<f64> = weights.iter().map(|w| self.n_clustered as f64 * w / total).collect();
        let mut sizes: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
        let assigned: usize = sizes.iter().sum();
        let mut order: Vec<usize> = (0..self.k).collect();
        order.sort_by(|&a, &b| {
            let (fa, fb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
            fb.total_cmp(&fa).then(a.cmp(&b))
        });
        for &i in order.iter().take(self.n_clustered.saturating_sub(assigned)) {
            sizes[i] += 1;
        }
        sizes
    }
}

/// Everything the generator drew, for callers that need the centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub data: Dataset,
    pub truth: Clustering,
    /// Per ground-truth cluster: center value for each of its relevant dims.
    pub centers: Vec<Vec<f64>>,
}

/// Generates data and ground truth. The seed comes from `spec.seed`, falling
/// back to [`DEFAULT_SEED`].
pub fn generate(spec: &GeneratorSpec) -> Result<Generated, InvalidSpec> {
    spec.validate()?;
    let seed = spec.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = SeededRng::new(seed);
    let [lo, hi] = spec.value_range;
    let ext = spec.extent;

    let mut subspaces = Vec::with_capacity(spec.k);
    let mut centers = Vec::with_capacity(spec.k);
    for _ in 0..spec.k {
        let size = rng.between(spec.dims_min, spec.dims_max);
        let mut dims = rng.sample_indices(spec.d, size);
        dims.sort_unstable();
        let center: Vec<f64> = dims.iter().map(|_| rng.uniform_in(lo + ext, hi - ext)).collect();
        subspaces.push(dims);
        centers.push(center);
    }

    let sizes = spec.cluster_sizes();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(spec.n_clustered + spec.n_noise);
    let mut labels: Vec<Option<usize>> = Vec::with_capacity(rows.capacity());
    for (c, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            let mut row = Vec::with_capacity(spec.d);
            let mut rel = 0;
            for j in 0..spec.d {
                if subspaces[c].get(rel) == Some(&j) {
                    let center = centers[c][rel];
                    row.push(match spec.model {
                        ClusterModel::UniformBox => rng.uniform_in(center - ext, center + ext),
                        ClusterModel::Gaussian => {
                            truncated_normal(&mut rng, center, ext / 2.0, center - ext, center + ext)
                        }
                    });
                    rel += 1;
                } else {
                    row.push(rng.uniform_in(lo, hi));
                }
            }
            rows.push(row);
            labels.push(Some(c));
        }
    }
    for _ in 0..spec.n_noise {
        rows.push((0..spec.d).map(|_| rng.uniform_in(lo, hi)).collect());
        labels.push(None);
    }

    let mut order: Vec<usize> = (0..rows.len()).collect();
    rng.shuffle(&mut order);
    let mut members = vec![Vec::new(); spec.k];
    let mut shuffled = Vec::with_capacity(rows.len());
    for (new_id, &old) in order.iter().enumerate() {
        shuffled.push(std::mem::take(&mut rows[old]));
        if let Some(c) = labels[old] {
            members[c].push(new_id);
        }
    }

    let n = shuffled.len();
    let data = Dataset::new(
        shuffled,
        default_dim_names(spec.d),
        Some(format!("generated-seed-{seed}")),
    )
    .expect("generated values are finite");
    let clusters = members
        .into_iter()
        .zip(&subspaces)
        .map(|(m, s)| SubspaceCluster::new(m, s.iter().copied()).expect("sizes are positive"))
        .collect();
    let truth = Clustering::new(clusters, n, spec.d).expect("ids in range");
    Ok(Generated { data, truth, centers })
}

fn truncated_normal(rng: &mut SeededRng, mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    loop {
        let v = mean + sd * rng.standard_normal();
        if (lo..=hi).contains(&v) {
            return v;
        }
    }
}
