//! Equal-coefficient approximation of a doubly stochastic overlay by `m`
//! permutations.
//!
//! Starting from `B = m·n·A`, permutations are peeled off greedily as perfect
//! matchings on the support `{B ≥ 1}`. When no perfect matching exists, Hall's
//! condition fails on the support, which forces the remaining mass per row to
//! be at most `(n+1)²/4`; the rest of the `m` slots are filled with the
//! identity. The averaged matrix `P` then satisfies
//! `max |A − P| ≤ (n+1)²/(2mn)`.

use serde::Serialize;

use super::OverlayMatrix;
use crate::error::{Error, Result};

/// Support entries within this distance below 1 still count as available.
const SUPPORT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct PermutationDecomposition {
    /// Number of permutations `m`.
    pub m: usize,
    /// `perms[k][f]` is the column matched to row `f` by the k-th permutation.
    pub perms: Vec<Vec<usize>>,
    /// How many of `perms` were extracted before padding began.
    pub extracted: usize,
    /// `max_{f,g} |A_fg − P_fg|` with `P = (1/(mn)) Σ_k P_k`.
    pub residual_inf_norm: f64,
    /// `(n+1)²/(2mn)`.
    pub bound: f64,
}

impl PermutationDecomposition {
    /// `P = (1/(mn)) Σ_k P_k`, row-major.
    pub fn averaged(&self) -> Vec<f64> {
        let n = self.perms.first().map_or(0, Vec::len);
        let mut p = vec![0.0; n * n];
        let unit = 1.0 / (self.m as f64 * n as f64);
        for perm in &self.perms {
            for (f, &g) in perm.iter().enumerate() {
                p[f * n + g] += unit;
            }
        }
        p
    }
}

pub fn birkhoff_bound(n: usize, m: usize) -> f64 {
    let n1 = (n + 1) as f64;
    n1 * n1 / (2.0 * m as f64 * n as f64)
}

/// Perfect matching of rows to columns using only allowed cells (Kuhn's
/// augmenting paths). `allowed[f*n + g]`.
pub fn perfect_matching(allowed: &[bool], n: usize) -> Option<Vec<usize>> {
    fn augment(f: usize, allowed: &[bool], n: usize, seen: &mut [bool], col_owner: &mut [usize]) -> bool {
        for g in 0..n {
            if allowed[f * n + g] && !seen[g] {
                seen[g] = true;
                if col_owner[g] == usize::MAX || augment(col_owner[g], allowed, n, seen, col_owner) {
                    col_owner[g] = f;
                    return true;
                }
            }
        }
        false
    }
    let mut col_owner = vec![usize::MAX; n];
    for f in 0..n {
        let mut seen = vec![false; n];
        if !augment(f, allowed, n, &mut seen, &mut col_owner) {
            return None;
        }
    }
    let mut row_match = vec![0; n];
    for (g, &f) in col_owner.iter().enumerate() {
        row_match[f] = g;
    }
    Some(row_match)
}

pub fn birkhoff_approximate(a: &OverlayMatrix, m: usize) -> Result<PermutationDecomposition> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::InvalidOverlay(format!(
            "Birkhoff approximation needs a square overlay, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one permutation".into()));
    }
    let scale = (m * n) as f64;
    let mut rest: Vec<f64> = a.entries().iter().map(|x| x * scale).collect();
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(m);
    while perms.len() < m {
        let allowed: Vec<bool> = rest.iter().map(|&b| b >= 1.0 - SUPPORT_SLACK).collect();
        let Some(perm) = perfect_matching(&allowed, n) else {
            break;
        };
        // Repeating the same matching is what the one-at-a-time greedy would do
        // while every matched cell still holds at least one unit.
        let times = perm
            .iter()
            .enumerate()
            .map(|(f, &g)| (rest[f * n + g] + SUPPORT_SLACK).floor() as usize)
            .min()
            .unwrap_or(0)
            .clamp(1, m - perms.len());
        for (f, &g) in perm.iter().enumerate() {
            rest[f * n + g] -= times as f64;
        }
        perms.extend(std::iter::repeat_n(perm, times));
    }
    let extracted = perms.len();
    let identity: Vec<usize> = (0..n).collect();
    perms.resize(m, identity);

    let mut decomposition = PermutationDecomposition {
        m,
        perms,
        extracted,
        residual_inf_norm: 0.0,
        bound: birkhoff_bound(n, m),
    };
    decomposition.residual_inf_norm = decomposition
        .averaged()
        .iter()
        .zip(a.entries())
        .map(|(p, x)| (p - x).abs())
        .fold(0.0, f64::max);
    if decomposition.residual_inf_norm > decomposition.bound + 1e-12 {
        return Err(Error::Invariant(format!(
            "residual {} exceeds the bound {}",
            decomposition.residual_inf_norm, decomposition.bound
        )));
    }
    Ok(decomposition)
}

/// Alternately normalizes rows and columns of a positive `n×n` matrix until
/// both sum to 1 within `tol`. Returns the doubly stochastic result.
pub fn sinkhorn_scale(matrix: &[f64], n: usize, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    if matrix.len() != n * n
        || matrix
            .iter()
            .any(|&x| x.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !x.is_finite())
    {
        return Err(Error::InvalidArgument(
            "Sinkhorn scaling needs a positive square matrix".into(),
        ));
    }
    let mut x = matrix.to_vec();
    for _ in 0..max_iter {
        for row in x.chunks_mut(n) {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
        }
        let mut worst: f64 = 0.0;
        for g in 0..n {
            let s: f64 = (0..n).map(|f| x[f * n + g]).sum();
            for f in 0..n {
                x[f * n + g] /= s;
            }
        }
        for row in x.chunks(n) {
            worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
        }
        if worst <= tol {
            return Ok(x);
        }
    }
    Err(Error::Invariant(format!(
        "Sinkhorn scaling did not reach tolerance {tol}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_two_by_two() {
        let a = OverlayMatrix::uniform(2, 2);
        let d = birkhoff_approximate(&a, 2).unwrap();
        let mut perms = d.perms.clone();
        perms.sort();
        assert_eq!(perms, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(d.residual_inf_norm, 0.0);
        assert_eq!(d.extracted, 2);
    }

    #[test]
    fn permutation_overlay_is_exact() {
        let a = OverlayMatrix::from_bijection(&[2, 0, 3, 1]).unwrap();
        for m in [1, 3, 10] {
            let d = birkhoff_approximate(&a, m).unwrap();
            assert!(d.residual_inf_norm < 1e-15);
            assert!(d.perms.iter().all(|p| p == &vec![2, 0, 3, 1]));
        }
    }

    #[test]
    fn random_doubly_stochastic_within_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.gen_range(2..=8);
            let raw: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.01..1.0)).collect();
            let ds = sinkhorn_scale(&raw, n, 1e-15, 10_000).unwrap();
            let a = OverlayMatrix::from_doubly_stochastic(&ds, n).unwrap();
            for m in [1, 7, 100] {
                let d = birkhoff_approximate(&a, m).unwrap();
                assert!(d.residual_inf_norm <= d.bound);
                assert_eq!(d.perms.len(), m);
            }
        }
    }

    #[test]
    fn matching_detects_hall_violation() {
        // rows 0 and 1 both only see column 0
        let allowed = [true, false, false, true, false, false, true, true, true];
        assert!(perfect_matching(&allowed, 3).is_none());
        let allowed = [true, true, false, true, false, false, false, true, true];
        let p = perfect_matching(&allowed, 3).unwrap();
        assert_eq!(p, vec![1, 0, 2]);
    }

    #[test]
    fn rejects_rectangular() {
        assert!(birkhoff_approximate(&OverlayMatrix::uniform(2, 3), 5).is_err());
        assert!(birkhoff_approximate(&OverlayMatrix::uniform(2, 2), 0).is_err());
    }
}
