//! Maximum-weight one-to-one matching (Hungarian method, O(m³)).

/// Maximum total weight of a one-to-one matching between the rows and
/// columns of `weights` (rectangular; padded internally to a square matrix
/// with zeros). Returns the weight and, per row, the matched column if the
/// column is a real one.
pub fn max_weight_matching(weights: &[Vec<u64>]) -> (u64, Vec<Option<usize>>) {
    let rows = weights.len();
    let cols = weights.iter().map(Vec::len).max().unwrap_or(0);
    let m = rows.max(cols);
    if m == 0 {
        return (0, Vec::new());
    }
    let top = weights.iter().flatten().copied().max().unwrap_or(0) as i128;
    // Minimize top - w over the padded square matrix.
    let cost =
        |i: usize, j: usize| -> i128 { top - weights.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0) as i128 };

    // 1-based potentials formulation; column 0 is a sentinel.
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; m + 1];
    let mut v = vec![0i128; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=m {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![None; rows];
    let mut total = 0u64;
    for j in 1..=m {
        let i = owner[j] - 1;
        if i < rows && j - 1 < weights[i].len() {
            assignment[i] = Some(j - 1);
            total += weights[i][j - 1];
        }
    }
    (total, assignment)
}
