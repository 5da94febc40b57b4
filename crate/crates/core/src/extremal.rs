//! Edge-density maximization over weighted templates, and measurements of how
//! close a step graphon is to the extremal structure.
//!
//! A 0/1-valued step graphon with zero diagonal is a weighted copy of its
//! support graph `F`, and it is `K_{r+1}`-free exactly when `F` is. Its edge
//! density is `wᵀMw = 2 Σ_{ij ∈ E(F)} w_i w_j` for the part weights `w` and
//! adjacency matrix `M`, so maximizing density over such graphons reduces to a
//! quadratic program on the simplex, solved here by replicator updates
//! `w_i ← w_i (Mw)_i / wᵀMw`. For `F = K_r` the optimum is `(r−1)/r`, at the
//! uniform weights only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{cap, Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::stepgraphon::StepGraphon;

#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    /// Stop a run once no weight moves by more than this in one update.
    pub tol: f64,
    pub seed: u64,
    /// Random starts in addition to the uniform one.
    pub restarts: usize,
    pub max_iterations: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            tol: 1e-9,
            seed: 0,
            restarts: 8,
            max_iterations: 200_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CliqueDensityOptimum {
    pub value: f64,
    pub weights: Vec<f64>,
    /// 0 for the uniform start, `r` for random start `r`.
    pub start: usize,
    pub iterations: usize,
}

fn quadratic(g: &Graph, w: &[f64]) -> (Vec<f64>, f64) {
    let mw: Vec<f64> = (0..g.order()).map(|i| g.neighbors(i).map(|j| w[j]).sum()).collect();
    let value = w.iter().zip(&mw).map(|(a, b)| a * b).sum();
    (mw, value)
}

fn replicator(g: &Graph, mut w: Vec<f64>, opts: &OptimizeOptions) -> Result<(f64, Vec<f64>, usize)> {
    let (mut mw, mut value) = quadratic(g, &w);
    for it in 1..=opts.max_iterations {
        let next: Vec<f64> = w.iter().zip(&mw).map(|(a, b)| a * b / value).collect();
        let (next_mw, next_value) = quadratic(g, &next);
        if next_value < value - 1e-15 {
            return Err(Error::Invariant(format!(
                "replicator update decreased the density from {value} to {next_value}"
            )));
        }
        let moved = w.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        w = next;
        mw = next_mw;
        value = next_value;
        if moved <= opts.tol {
            return Ok((value, w, it));
        }
    }
    Ok((value, w, opts.max_iterations))
}

/// Maximizes `2 Σ_{ij ∈ E(template)} w_i w_j` over the probability simplex.
/// Starts from the uniform vector and `restarts` random interior points; the
/// best run wins; a later run must improve by more than rounding noise.
pub fn clique_density_optimize(template: &Graph, opts: &OptimizeOptions) -> Result<CliqueDensityOptimum> {
    let k = template.order();
    if k == 0 || template.size() == 0 {
        return Err(Error::InvalidGraph("template needs at least one edge".into()));
    }
    let runs: Vec<Result<CliqueDensityOptimum>> = (0..=opts.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                vec![1.0 / k as f64; k]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(r as u64);
                // exponential spacings give a uniform point of the simplex
                let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                let s: f64 = e.iter().sum();
                e.into_iter().map(|x| x / s).collect()
            };
            let (value, weights, iterations) = replicator(template, start, opts)?;
            Ok(CliqueDensityOptimum {
                value,
                weights,
                start: r,
                iterations,
            })
        })
        .collect();
    let mut best: Option<CliqueDensityOptimum> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value > b.value + 1e-14) {
            best = Some(run);
        }
    }
    Ok(best.expect("uniform start"))
}

/// The 0/1 step graphon with parts weighted by `weights` and values given by
/// the template's adjacency (zero diagonal).
pub fn template_graphon(template: &Graph, weights: &[f64]) -> Result<StepGraphon<f64>> {
    let k = template.order();
    if weights.len() != k {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {k} template vertices",
            weights.len()
        )));
    }
    let total: f64 = weights.iter().sum();
    let weights = weights.iter().map(|w| w / total).collect();
    let values = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if template.has_edge(i, j) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    StepGraphon::new(weights, values)
}

/// `max_i |W_*(i) − ρ(W)|`, zero exactly when `W` is degree-regular.
pub fn degree_regularity_gap<S: Scalar>(w: &StepGraphon<S>) -> S {
    let rho = w.edge_density();
    w.degree_function()
        .into_iter()
        .map(|d| (d - rho.clone()).abs())
        .fold(S::zero(), |a, b| if b > a { b } else { a })
}

pub const MULTIPARTITE_PART_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultipartiteFit<S> {
    pub distance: S,
    /// Class of each part.
    pub classes: Vec<usize>,
}

/// `min ‖W − K‖₁` over complete `r`-partite step graphons `K` obtained by
/// assigning each part of `W` to one of `r` classes. Assignments are
/// enumerated up to renaming the classes, which leaves `K` unchanged.
pub fn l1_to_multipartite<S: Scalar>(w: &StepGraphon<S>, r: usize) -> Result<MultipartiteFit<S>> {
    let k = w.parts();
    cap("step graphon parts", k, MULTIPARTITE_PART_CAP)?;
    if r == 0 {
        return Err(Error::InvalidArgument("need at least one class".into()));
    }
    let lam = w.weights();
    // cost of a pair of parts landing in the same class versus different ones
    let same: Vec<S> = (0..k * k)
        .map(|c| lam[c / k].clone() * lam[c % k].clone() * w.value(c / k, c % k).abs())
        .collect();
    let apart: Vec<S> = (0..k * k)
        .map(|c| lam[c / k].clone() * lam[c % k].clone() * (S::one() - w.value(c / k, c % k).clone()).abs())
        .collect();

    struct Search<'a, S> {
        k: usize,
        r: usize,
        same: &'a [S],
        apart: &'a [S],
        classes: Vec<usize>,
        best: Option<MultipartiteFit<S>>,
    }
    impl<S: Scalar> Search<'_, S> {
        fn go(&mut self, i: usize, used: usize, cost: S) {
            if self.best.as_ref().is_some_and(|b| cost >= b.distance) {
                return;
            }
            if i == self.k {
                self.best = Some(MultipartiteFit {
                    distance: cost,
                    classes: self.classes.clone(),
                });
                return;
            }
            for c in 0..(used + 1).min(self.r) {
                // pairs (i, j) and (j, i) for earlier j, plus the diagonal cell
                let mut add = self.same[i * self.k + i].clone();
                for j in 0..i {
                    let cell = if self.classes[j] == c { &self.same } else { &self.apart };
                    add = add + cell[i * self.k + j].clone() + cell[j * self.k + i].clone();
                }
                self.classes[i] = c;
                self.go(i + 1, used.max(c + 1), cost.clone() + add);
            }
        }
    }
    let mut search = Search {
        k,
        r,
        same: &same,
        apart: &apart,
        classes: vec![0; k],
        best: None,
    };
    search.go(0, 0, S::zero());
    Ok(search.best.expect("some assignment"))
}

pub const CHROMATIC_ORDER_CAP: usize = 10;

/// Smallest number of colours properly colouring `g`, by backtracking.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    let n = g.order();
    cap("graph order for colouring", n, CHROMATIC_ORDER_CAP)?;
    fn colour(g: &Graph, v: usize, k: usize, used: usize, col: &mut [usize]) -> bool {
        if v == g.order() {
            return true;
        }
        for c in 0..(used + 1).min(k) {
            if g.neighbors(v).all(|u| u >= v || col[u] != c) {
                col[v] = c;
                if colour(g, v + 1, k, used.max(c + 1), col) {
                    return true;
                }
            }
        }
        false
    }
    let mut col = vec![0; n];
    Ok((0..=n)
        .find(|&k| colour(g, 0, k, 0, &mut col))
        .expect("n colours always suffice"))
}
