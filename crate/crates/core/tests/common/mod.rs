//! Random instances and brute-force oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use subspace_core::{Clustering, Dataset, SeededRng, SubspaceCluster};

pub fn random_subset(rng: &mut SeededRng, n: usize, min: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.uniform() < 0.5).collect();
        if s.len() >= min {
            return s;
        }
    }
}

/// Clusters with arbitrary overlap (possibly duplicated).
pub fn random_clustering(rng: &mut SeededRng, n: usize, d: usize, max_k: usize) -> Clustering {
    let k = rng.below(max_k + 1);
    let clusters = (0..k)
        .map(|_| SubspaceCluster::new(random_subset(rng, n, 1), random_subset(rng, d, 1)).unwrap())
        .collect();
    Clustering::new(clusters, n, d).unwrap()
}

/// Object-disjoint clusters, hence also micro-object-disjoint.
pub fn random_disjoint_clustering(rng: &mut SeededRng, n: usize, d: usize, max_k: usize) -> Clustering {
    let k = rng.below(max_k + 1).min(n);
    let mut label: Vec<usize> = (0..n).map(|_| rng.below(k + 1)).collect();
    // make sure each of the k clusters is non-empty
    for (c, slot) in rng.sample_indices(n, k).into_iter().enumerate() {
        label[slot] = c;
    }
    let clusters = (0..k)
        .map(|c| {
            let objects: Vec<usize> = (0..n).filter(|&o| label[o] == c).collect();
            SubspaceCluster::new(objects, random_subset(rng, d, 1)).unwrap()
        })
        .collect();
    Clustering::new(clusters, n, d).unwrap()
}

pub fn zero_dataset(n: usize, d: usize) -> Dataset {
    Dataset::from_rows(vec![vec![0.0; d]; n], d).unwrap()
}

pub fn random_dataset(rng: &mut SeededRng, n: usize, d: usize) -> Dataset {
    let rows = (0..n).map(|_| (0..d).map(|_| rng.uniform()).collect()).collect();
    Dataset::from_rows(rows, d).unwrap()
}

/// Micro-objects of a clustering, enumerated directly.
pub fn micro_set(c: &Clustering) -> HashSet<(usize, usize)> {
    let mut s = HashSet::new();
    for cl in c.clusters() {
        for &o in cl.objects() {
            for &j in cl.dims() {
                s.insert((o, j));
            }
        }
    }
    s
}

/// Maximum over all injective row → column assignments (rows padded to
/// the larger side), by exhaustive permutation.
pub fn brute_force_matching(w: &[Vec<u64>]) -> u64 {
    let rows = w.len();
    let cols = w.iter().map(Vec::len).max().unwrap_or(0);
    let m = rows.max(cols);
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = 0;
    permute(&mut perm, 0, &mut |p| {
        let total = (0..rows).map(|i| w[i].get(p[i]).copied().unwrap_or(0)).sum::<u64>();
        best = best.max(total);
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

pub fn micro_overlap_matrix(found: &Clustering, reference: &Clustering) -> Vec<Vec<u64>> {
    found
        .clusters()
        .iter()
        .map(|a| {
            reference
                .clusters()
                .iter()
                .map(|b| {
                    let objs = a.objects().iter().filter(|o| b.objects().contains(o)).count();
                    let dims = a.dims().iter().filter(|j| b.dims().contains(j)).count();
                    (objs * dims) as u64
                })
                .collect()
        })
        .collect()
}

/// Interval of `v` on a grid of `xi` equal-width intervals over `[lo, hi]`:
/// the number of interior boundaries `lo + (hi - lo)·t/xi` not above `v`.
pub fn grid_cell(v: f64, lo: f64, hi: f64, xi: usize) -> usize {
    if hi <= lo {
        return 0;
    }
    (1..xi).filter(|&t| lo + (hi - lo) * t as f64 / xi as f64 <= v).count()
}

/// (dims, intervals) → objects for every dense cell of every subspace,
/// counting objects cell by cell without any pruning.
pub fn brute_force_dense_units(
    data: &Dataset,
    xi: usize,
    threshold: usize,
) -> BTreeMap<(Vec<usize>, Vec<usize>), Vec<usize>> {
    let d = data.d();
    let bounds: Vec<(f64, f64)> = (0..d)
        .map(|j| {
            let col = (0..data.n()).map(|i| data.value(i, j));
            (
                col.clone().fold(f64::INFINITY, f64::min),
                col.fold(f64::NEG_INFINITY, f64::max),
            )
        })
        .collect();
    let cells: Vec<Vec<usize>> = (0..data.n())
        .map(|i| {
            (0..d)
                .map(|j| grid_cell(data.value(i, j), bounds[j].0, bounds[j].1, xi))
                .collect()
        })
        .collect();
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << d) {
        let dims: Vec<usize> = (0..d).filter(|j| mask >> j & 1 == 1).collect();
        let mut counts: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, c) in cells.iter().enumerate() {
            counts.entry(dims.iter().map(|&j| c[j]).collect()).or_default().push(i);
        }
        for (iv, objs) in counts {
            if objs.len() >= threshold {
                out.insert((dims.clone(), iv), objs);
            }
        }
    }
    out
}

/// Clusters as (dims, objects): unions of face-adjacent dense units per
/// subspace, found by repeated merging until stable.
pub fn brute_force_clique_clusters(
    units: &BTreeMap<(Vec<usize>, Vec<usize>), Vec<usize>>,
) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let mut by_dims: BTreeMap<&Vec<usize>, Vec<&Vec<usize>>> = BTreeMap::new();
    for (dims, iv) in units.keys() {
        by_dims.entry(dims).or_default().push(iv);
    }
    let mut out = BTreeSet::new();
    for (dims, ivs) in by_dims {
        let mut group: Vec<usize> = (0..ivs.len()).collect();
        let adjacent =
            |a: &Vec<usize>, b: &Vec<usize>| a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum::<usize>() == 1;
        let mut changed = true;
        while changed {
            changed = false;
            for a in 0..ivs.len() {
                for b in 0..ivs.len() {
                    if adjacent(ivs[a], ivs[b]) && group[a] != group[b] {
                        let (keep, drop) = (group[a].min(group[b]), group[a].max(group[b]));
                        for g in group.iter_mut() {
                            if *g == drop {
                                *g = keep;
                            }
                        }
                        changed = true;
                    }
                }
            }
        }
        let mut comps: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (idx, iv) in ivs.iter().enumerate() {
            comps
                .entry(group[idx])
                .or_default()
                .extend(units[&(dims.clone(), (*iv).clone())].iter().copied());
        }
        for objs in comps.into_values() {
            out.insert((dims.clone(), objs.into_iter().collect()));
        }
    }
    out
}

pub fn as_pairs(c: &Clustering) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    c.clusters()
        .iter()
        .map(|cl| (cl.dims().to_vec(), cl.objects().to_vec()))
        .collect()
}

/// `ceil(fraction · n)` computed in exact rational arithmetic for fractions
/// given as `num / den`.
pub fn ceil_frac(num: usize, den: usize, n: usize) -> usize {
    (num * n).div_ceil(den)
}
