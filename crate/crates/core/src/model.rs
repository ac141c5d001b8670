//! Domain types shared by every module: datasets, subspace clusters,
//! clusterings and micro-object sets.
//!
//! Object and dimension ids are 0-based everywhere.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dataset must have at least one dimension")]
    NoDimensions,
    #[error("row {row} has {found} values, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("non-finite value {value} at row {row}, dimension {dim}")]
    NonFinite { row: usize, dim: usize, value: f64 },
    #[error("duplicate dimension name {0:?}")]
    DuplicateDimName(String),
    #[error("cluster has no objects")]
    EmptyObjects,
    #[error("cluster has no relevant dimensions")]
    EmptyDims,
    #[error("cluster {cluster}: object id {id} out of range (n = {n})")]
    ObjectOutOfRange { cluster: usize, id: usize, n: usize },
    #[error("cluster {cluster}: dimension id {id} out of range (d = {d})")]
    DimOutOfRange { cluster: usize, id: usize, d: usize },
}

/// `n` objects by `d` finite real-valued dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n: usize,
    dim_names: Vec<String>,
    source_label: Option<String>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, dim_names: Vec<String>, source_label: Option<String>) -> Result<Self, ModelError> {
        let d = dim_names.len();
        if d == 0 {
            return Err(ModelError::NoDimensions);
        }
        let mut seen = BTreeSet::new();
        for name in &dim_names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateDimName(name.clone()));
            }
        }
        let n = rows.len();
        let mut values = Vec::with_capacity(n * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(ModelError::RowLength {
                    row: i,
                    expected: d,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(ModelError::NonFinite {
                        row: i,
                        dim: j,
                        value: v,
                    });
                }
            }
            values.extend(row);
        }
        Ok(Self {
            values,
            n,
            dim_names,
            source_label,
        })
    }

    /// Dataset with generated names `dim_0 .. dim_{d-1}`.
    pub fn from_rows(rows: Vec<Vec<f64>>, d: usize) -> Result<Self, ModelError> {
        Self::new(rows, default_dim_names(d), None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.dim_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.d();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.d() + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d())
    }

    pub fn dim_names(&self) -> &[String] {
        &self.dim_names
    }

    pub fn source_label(&self) -> Option<&str> {
        self.source_label.as_deref()
    }

    pub fn with_source_label(mut self, label: impl Into<String>) -> Self {
        self.source_label = Some(label.into());
        self
    }

    /// Per-dimension `(min, max)`; `None` for an empty dataset.
    pub fn bounds(&self) -> Option<Vec<(f64, f64)>> {
        if self.n == 0 {
            return None;
        }
        let mut b: Vec<(f64, f64)> = self.row(0).iter().map(|&v| (v, v)).collect();
        for row in self.rows().skip(1) {
            for (slot, &v) in b.iter_mut().zip(row) {
                slot.0 = slot.0.min(v);
                slot.1 = slot.1.max(v);
            }
        }
        Some(b)
    }
}

pub fn default_dim_names(d: usize) -> Vec<String> {
    (0..d).map(|j| format!("dim_{j}")).collect()
}

/// A pair (objects, relevant dimensions); both sets are non-empty and kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceCluster {
    objects: Vec<usize>,
    dims: Vec<usize>,
}

impl SubspaceCluster {
    pub fn new(
        objects: impl IntoIterator<Item = usize>,
        dims: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ModelError> {
        let objects = sorted_unique(objects);
        let dims = sorted_unique(dims);
        if objects.is_empty() {
            return Err(ModelError::EmptyObjects);
        }
        if dims.is_empty() {
            return Err(ModelError::EmptyDims);
        }
        Ok(Self { objects, dims })
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn has_object(&self, id: usize) -> bool {
        self.objects.binary_search(&id).is_ok()
    }

    pub fn has_dim(&self, j: usize) -> bool {
        self.dims.binary_search(&j).is_ok()
    }

    /// `|O| * |S|`.
    pub fn micro_size(&self) -> usize {
        self.objects.len() * self.dims.len()
    }

    /// Size of `micro(self) ∩ micro(other)`, i.e. `|O ∩ O'| * |S ∩ S'|`.
    pub fn micro_overlap(&self, other: &SubspaceCluster) -> usize {
        intersection_size(&self.objects, &other.objects) * intersection_size(&self.dims, &other.dims)
    }

    pub fn object_overlap(&self, other: &SubspaceCluster) -> usize {
        intersection_size(&self.objects, &other.objects)
    }

    pub fn micro_objects(&self) -> MicroObjectSet {
        micro_objects(self)
    }
}

/// Ordered list of subspace clusters over an `n × d` dataset.
/// Clusters may overlap and need not cover all objects or dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    clusters: Vec<SubspaceCluster>,
    n: usize,
    d: usize,
}

impl Clustering {
    pub fn new(clusters: Vec<SubspaceCluster>, n: usize, d: usize) -> Result<Self, ModelError> {
        for (c, cl) in clusters.iter().enumerate() {
            if let Some(&id) = cl.objects.last().filter(|&&id| id >= n) {
                return Err(ModelError::ObjectOutOfRange { cluster: c, id, n });
            }
            if let Some(&id) = cl.dims.last().filter(|&&id| id >= d) {
                return Err(ModelError::DimOutOfRange { cluster: c, id, d });
            }
        }
        Ok(Self { clusters, n, d })
    }

    pub fn empty(n: usize, d: usize) -> Self {
        Self {
            clusters: Vec::new(),
            n,
            d,
        }
    }

    pub fn clusters(&self) -> &[SubspaceCluster] {
        &self.clusters
    }

    pub fn into_clusters(self) -> Vec<SubspaceCluster> {
        self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Object count of the dataset this clustering describes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension count of the dataset this clustering describes.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn micro_union(&self) -> MicroObjectSet {
        clustering_micro_union(self)
    }

    /// How many clusters cover each micro-object (multiset view of the union).
    pub fn micro_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for c in &self.clusters {
            for &o in &c.objects {
                for &j in &c.dims {
                    *counts.entry((o, j)).or_insert(0) += 1;
                }
            }
        }
        counts
    }
}

/// A set of (object id, dimension id) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MicroObjectSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl MicroObjectSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, object: usize, dim: usize) -> bool {
        self.pairs.contains(&(object, dim))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn intersection_len(&self, other: &MicroObjectSet) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.pairs.iter().filter(|p| large.pairs.contains(p)).count()
    }

    pub fn union_len(&self, other: &MicroObjectSet) -> usize {
        self.len() + other.len() - self.intersection_len(other)
    }
}

impl FromIterator<(usize, usize)> for MicroObjectSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Self {
            pairs: iter.into_iter().collect(),
        }
    }
}

/// The Cartesian product `objects × dims` of a cluster.
pub fn micro_objects(cluster: &SubspaceCluster) -> MicroObjectSet {
    cluster
        .objects
        .iter()
        .flat_map(|&o| cluster.dims.iter().map(move |&j| (o, j)))
        .collect()
}

/// Set union of the micro-objects of every cluster.
pub fn clustering_micro_union(c: &Clustering) -> MicroObjectSet {
    c.clusters
        .iter()
        .flat_map(|cl| {
            cl.objects
                .iter()
                .flat_map(move |&o| cl.dims.iter().map(move |&j| (o, j)))
        })
        .collect()
}

fn sorted_unique(ids: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = ids.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Size of the intersection of two sorted, deduplicated slices.
pub(crate) fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Smallest integer count `c` with `c >= fraction * n`, tolerant of float noise
/// in the product (e.g. `0.3 * 10` is treated as exactly 3).
pub fn min_count(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}
