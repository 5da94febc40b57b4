//! Dense linear assignment (Hungarian method with potentials, O(n³)).

/// Minimum-cost perfect assignment for an `n×n` row-major cost matrix.
/// Returns `(cost, assignment)` where `assignment[row] = column`.
pub fn solve(cost: &[f64], n: usize) -> (f64, Vec<usize>) {
    debug_assert_eq!(cost.len(), n * n);
    if n == 0 {
        return (0.0, Vec::new());
    }
    // 1-based potentials; column 0 is a virtual start.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(r0 - 1) * n + (j - 1)] - u[r0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = col0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let total = (0..n).map(|r| cost[r * n + assignment[r]]).sum();
    (total, assignment)
}
