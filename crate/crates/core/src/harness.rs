//! Experiment drivers: perturbed Turán graphs and the separating pair.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::editdist::{self, HeuristicOptions};
use crate::error::{Error, Result};
use crate::fracdist::{delta1_objective, OverlayMatrix};
use crate::graph::{blow_up, example_4_1_blowup_bijection, example_4_1_pair, turan_graph, Graph};
use crate::scalar::{rational, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct StabilityRow {
    pub trial: usize,
    pub deletions: usize,
    /// `2k/n²`: the edge-density deficit, and the cost of undoing the deletions.
    pub density_deficit: f64,
    /// Heuristic δ̂₁ between the perturbed graph and `T_r(n)`.
    pub measured_distance: f64,
    pub mismatches: u64,
}

#[derive(Debug, Clone)]
pub struct StabilityConfig {
    pub r: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Random restarts of the local search, besides the identity start.
    pub restarts: usize,
}

impl StabilityConfig {
    pub fn new(r: usize, n: usize, trials: usize, seed: u64) -> Self {
        StabilityConfig {
            r,
            n,
            trials,
            seed,
            restarts: 2,
        }
    }
}

/// `T_r(n)` with `k` uniformly random edges deleted, for the given trial.
/// Trial `t` shuffles the edge list with ChaCha stream `t` and deletes a
/// prefix, so deletion sets are nested in `k` within a trial.
pub fn perturbed_turan(r: usize, n: usize, k: usize, seed: u64, trial: usize) -> Result<Graph> {
    let t = turan_graph(r, n)?;
    if k > t.size() {
        return Err(Error::InvalidArgument(format!(
            "cannot delete {k} edges from T_{r}({n}), which has {}",
            t.size()
        )));
    }
    let mut edges: Vec<(usize, usize)> = t.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    edges.shuffle(&mut rng);
    let mut g = t;
    for &(u, v) in &edges[..k] {
        g.remove(u, v);
    }
    Ok(g)
}

/// One row per trial: delete `k` edges from `T_r(n)` and measure the
/// heuristic edit distance back to `T_r(n)`, starting the search from the
/// identity (which costs exactly `k`). Asserts the measured distance never
/// exceeds the deletion certificate `2k/n²`.
pub fn stability_experiment(cfg: &StabilityConfig, k: usize) -> Result<Vec<StabilityRow>> {
    let (r, n) = (cfg.r, cfg.n);
    if r == 0 || n == 0 {
        return Err(Error::InvalidArgument("need r >= 1 and n >= 1".into()));
    }
    let t = turan_graph(r, n)?;
    let deficit = editdist::normalized(k as u64, n);
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let g = perturbed_turan(r, n, k, cfg.seed, trial)?;
            let opts =
                HeuristicOptions::new(cfg.restarts, cfg.seed.wrapping_add(trial as u64)).with_initial((0..n).collect());
            let res = editdist::edit_distance_heuristic(&g, &t, &opts)?;
            if res.value > deficit + 1e-12 {
                return Err(Error::Invariant(format!(
                    "trial {trial}: distance {} exceeds the deletion certificate {deficit}",
                    res.value
                )));
            }
            Ok(StabilityRow {
                trial,
                deletions: k,
                density_deficit: deficit,
                measured_distance: res.value,
                mismatches: res.mismatches,
            })
        })
        .collect()
}

/// Runs [`stability_experiment`] for every `k` in turn.
pub fn stability_sweep(cfg: &StabilityConfig, ks: &[usize]) -> Result<Vec<StabilityRow>> {
    let mut rows = Vec::new();
    for &k in ks {
        rows.extend(stability_experiment(cfg, k)?);
    }
    Ok(rows)
}

/// Mean measured distance per deletion count, in order of first appearance.
pub fn mean_distance_by_k(rows: &[StabilityRow]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64, usize)> = Vec::new();
    for row in rows {
        match out.iter_mut().find(|(k, _, _)| *k == row.deletions) {
            Some(e) => {
                e.1 += row.measured_distance;
                e.2 += 1;
            }
            None => out.push((row.deletions, row.measured_distance, 1)),
        }
    }
    out.into_iter().map(|(k, s, c)| (k, s / c as f64)).collect()
}

pub const STABILITY_CSV_HEADER: &str =
    "trial,deletions,density_deficit_2k_over_n2,measured_distance_2m_over_n2,mismatches";

pub fn stability_csv(rows: &[StabilityRow]) -> String {
    let mut out = String::from(STABILITY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.trial, r.deletions, r.density_deficit, r.measured_distance, r.mismatches
        );
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Example41Report {
    pub n: usize,
    pub order: usize,
    /// Adjacencies where G and H differ under the identity.
    pub identity_mismatches: u64,
    /// Mismatches of the fixed bijection between the 2-fold blow-ups.
    pub blowup_mismatches: u64,
    /// `2·22/v²`, exact.
    pub edit_value: String,
    /// `2·80/(2v)²`, exact: an upper bound on δ₁(G, H).
    pub blowup_value: String,
    /// `edit_value / blowup_value`.
    pub ratio: String,
    /// δ₁(G, H, A) for the overlay contracted from the blow-up bijection.
    pub contracted_overlay_value: f64,
    /// Best mismatch count found by local search. It does not certify the
    /// lower bound on δ̂₁(G, H); that rests on a counting argument.
    pub heuristic_mismatches: u64,
}

impl Example41Report {
    pub fn ratio_exact(&self) -> Rational {
        crate::scalar::parse_rational(&self.ratio).expect("written by us")
    }
}

/// Builds the separating pair and checks its two counts (22 and 80), giving
/// the exact ratio 11/10 between the edit value and the blow-up bound.
pub fn verify_example_4_1(n: usize, heuristic_restarts: usize, seed: u64) -> Result<Example41Report> {
    let (g, h) = example_4_1_pair(n)?;
    let order = g.order();
    let identity: Vec<usize> = (0..order).collect();
    let identity_mismatches = editdist::mismatches(&g, &h, &identity)?;
    let sigma = example_4_1_blowup_bijection(n)?;
    let (g2, h2) = (blow_up(&g, 2)?, blow_up(&h, 2)?);
    let blowup_mismatches = editdist::mismatches(&g2, &h2, &sigma)?;
    if identity_mismatches != 22 || blowup_mismatches != 80 {
        return Err(Error::Invariant(format!(
            "expected 22 and 80 mismatches, found {identity_mismatches} and {blowup_mismatches}"
        )));
    }
    let edit_value = editdist::normalized_exact(identity_mismatches, order);
    let blowup_value = editdist::normalized_exact(blowup_mismatches, 2 * order);
    let ratio = edit_value.clone() / blowup_value.clone();
    if ratio != rational(11, 10) {
        return Err(Error::Invariant(format!("ratio is {ratio}, expected 11/10")));
    }
    let overlay = OverlayMatrix::from_blowup_bijection(order, order, &sigma)?;
    let contracted_overlay_value = delta1_objective(&g, &h, &overlay)?;
    let heuristic = editdist::edit_distance_heuristic(
        &g,
        &h,
        &HeuristicOptions::new(heuristic_restarts, seed).with_initial(identity),
    )?;
    Ok(Example41Report {
        n,
        order,
        identity_mismatches,
        blowup_mismatches,
        edit_value: edit_value.to_string(),
        blowup_value: blowup_value.to_string(),
        ratio: ratio.to_string(),
        contracted_overlay_value,
        heuristic_mismatches: heuristic.mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_deletions_means_zero_distance() {
        let rows = stability_experiment(&StabilityConfig::new(3, 12, 4, 1), 0).unwrap();
        assert!(rows.iter().all(|r| r.measured_distance == 0.0));
    }

    #[test]
    fn deletions_are_nested_and_capped() {
        let a = perturbed_turan(2, 10, 5, 3, 0).unwrap();
        let b = perturbed_turan(2, 10, 8, 3, 0).unwrap();
        assert!(b.edges().all(|(u, v)| a.has_edge(u, v)));
        assert_eq!(a.size(), 25 - 5);
        assert!(perturbed_turan(2, 10, 26, 3, 0).is_err());
        assert!(!a.contains_clique(3));
    }

    #[test]
    fn csv_has_unit_header_and_one_line_per_row() {
        let rows = stability_experiment(&StabilityConfig::new(2, 10, 3, 0), 4).unwrap();
        let csv = stability_csv(&rows);
        assert!(csv.starts_with(STABILITY_CSV_HEADER));
        assert_eq!(csv.lines().count(), 4);
        assert_eq!(
            csv,
            stability_csv(&stability_experiment(&StabilityConfig::new(2, 10, 3, 0), 4).unwrap())
        );
    }

    #[test]
    fn example_counts_at_two_orders() {
        for n in [24, 30] {
            let r = verify_example_4_1(n, 1, 0).unwrap();
            assert_eq!((r.identity_mismatches, r.blowup_mismatches), (22, 80));
            assert_eq!(r.ratio_exact(), rational(11, 10));
            assert!(r.heuristic_mismatches <= 22);
            let bound = 2.0 * 80.0 / (4.0 * (r.order * r.order) as f64);
            assert!(r.contracted_overlay_value <= bound + 1e-12);
        }
        assert!(verify_example_4_1(23, 1, 0).is_err());
    }
}
