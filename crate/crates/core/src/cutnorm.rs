//! Cut norm of step kernels.
//!
//! For a symmetric step kernel `d` on parts with measures `λ`, the objective
//! `∫_{S×T} d` is bilinear in the fractional inclusion vectors
//! `(s_i), (t_j) ∈ [0,1]^k` of the parts, so the supremum over measurable
//! `S, T` is attained with every part wholly in or out. The exact search
//! therefore ranges over subsets of parts; for a fixed `S` the best `T` is read
//! off the signs of the column sums, which costs `O(k·2^k)` in total.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::editdist::{self, HeuristicOptions};
use crate::error::{cap, Error, Result};
use crate::graph::{for_each_permutation, Graph};
use crate::scalar::{rational, sum, Rational, Scalar};
use crate::stepgraphon::{common_refinement, StepGraphon};

pub const DEFAULT_EXACT_CAP: usize = 16;

/// Symmetric step function with unbounded real values.
#[derive(Clone, Debug, PartialEq)]
pub struct StepKernel<S = f64> {
    weights: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> StepKernel<S> {
    pub fn new(weights: Vec<S>, values: Vec<Vec<S>>) -> Result<Self> {
        let k = weights.len();
        if k == 0 || values.len() != k || values.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidGraphon(format!(
                "kernel needs {k} parts and a {k}x{k} value matrix"
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidGraphon("negative part weight".into()));
        }
        crate::stepgraphon::check_unit_sum(&weights)?;
        for i in 0..k {
            for j in 0..i {
                if values[i][j] != values[j][i] {
                    return Err(Error::InvalidGraphon(format!("kernel not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(StepKernel {
            weights,
            values: values.into_iter().flatten().collect(),
        })
    }

    pub fn from_graphon(w: &StepGraphon<S>) -> Self {
        StepKernel {
            weights: w.weights().to_vec(),
            values: w.raw_values().to_vec(),
        }
    }

    /// `u − w` on the common refinement of the two partitions.
    pub fn difference(u: &StepGraphon<S>, w: &StepGraphon<S>) -> Self {
        let (a, b) = common_refinement(u, w);
        let values = a
            .raw_values()
            .iter()
            .zip(b.raw_values())
            .map(|(x, y)| x.clone() - y.clone())
            .collect();
        StepKernel {
            weights: a.weights().to_vec(),
            values,
        }
    }

    pub fn parts(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn value(&self, i: usize, j: usize) -> &S {
        &self.values[i * self.parts() + j]
    }

    pub fn neg(&self) -> Self {
        StepKernel {
            weights: self.weights.clone(),
            values: self.values.iter().map(|v| -v.clone()).collect(),
        }
    }

    /// `λ_i λ_j d_ij`: the mass of cell `(i, j)`.
    fn mass(&self, i: usize, j: usize) -> S {
        self.weights[i].clone() * self.weights[j].clone() * self.value(i, j).clone()
    }

    pub fn l1_norm(&self) -> S {
        let k = self.parts();
        sum((0..k * k).map(|c| self.mass(c / k, c % k).abs()))
    }

    /// `∫_{S×T} d` for part subsets given as index lists.
    pub fn rectangle_sum(&self, s: &[usize], t: &[usize]) -> S {
        sum(s
            .iter()
            .flat_map(|&i| t.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.mass(i, j)))
    }
}

/// A maximizing rectangle: `|∫_{S×T} d| = value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutCertificate<S> {
    pub value: S,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl<S: Scalar> CutCertificate<S> {
    pub fn to_f64(&self) -> CutCertificate<f64> {
        CutCertificate {
            value: self.value.to_f64(),
            s: self.s.clone(),
            t: self.t.clone(),
        }
    }
}

/// Best `T` for a given vector of column sums: the positive columns or the
/// negative ones, whichever has larger absolute total. Ties go to positive.
fn best_columns<S: Scalar>(col: &[S]) -> (S, bool) {
    let mut pos = S::zero();
    let mut neg = S::zero();
    for c in col {
        if c.is_positive() {
            pos = pos + c.clone();
        } else if c.is_negative() {
            neg = neg - c.clone();
        }
    }
    if neg > pos {
        (neg, false)
    } else {
        (pos, true)
    }
}

fn columns_with_sign<S: Scalar>(col: &[S], positive: bool) -> Vec<usize> {
    (0..col.len())
        .filter(|&j| {
            if positive {
                col[j].is_positive()
            } else {
                col[j].is_negative()
            }
        })
        .collect()
}

pub fn cut_norm_exact<S: Scalar>(d: &StepKernel<S>) -> Result<CutCertificate<S>> {
    cut_norm_exact_with(d, DEFAULT_EXACT_CAP)
}

/// Exhaustive over `S` in Gray-code order, updating column sums in place.
pub fn cut_norm_exact_with<S: Scalar>(d: &StepKernel<S>, max_parts: usize) -> Result<CutCertificate<S>> {
    let k = d.parts();
    cap("kernel parts (use the heuristic)", k, max_parts)?;
    let mut col = vec![S::zero(); k];
    let mut in_s = vec![false; k];
    let mut best = CutCertificate {
        value: S::zero(),
        s: Vec::new(),
        t: Vec::new(),
    };
    let mut best_mask = (0u64, true);
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        in_s[flip] = !in_s[flip];
        for (j, c) in col.iter_mut().enumerate() {
            let m = d.mass(flip, j);
            *c = if in_s[flip] { c.clone() + m } else { c.clone() - m };
        }
        let (value, positive) = best_columns(&col);
        if value > best.value {
            best.value = value;
            best_mask = (step ^ (step >> 1), positive);
        }
    }
    if best.value.is_positive() {
        let (mask, positive) = best_mask;
        best.s = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let col: Vec<S> = (0..k).map(|j| sum(best.s.iter().map(|&i| d.mass(i, j)))).collect();
        best.t = columns_with_sign(&col, positive);
    }
    Ok(best)
}

/// Alternates `T ← best response to S`, `S ← best response to T` for a fixed
/// sign until the signed rectangle sum stops increasing.
fn alternate<S: Scalar>(d: &StepKernel<S>, mut s: Vec<usize>, positive: bool) -> CutCertificate<S> {
    let k = d.parts();
    let signed = |x: S| if positive { x } else { -x };
    let mut current = S::zero();
    let mut t: Vec<usize> = Vec::new();
    loop {
        let col: Vec<S> = (0..k).map(|j| sum(s.iter().map(|&i| d.mass(i, j)))).collect();
        let new_t = columns_with_sign(&col, positive);
        let row: Vec<S> = (0..k).map(|i| sum(new_t.iter().map(|&j| d.mass(i, j)))).collect();
        let new_s = columns_with_sign(&row, positive);
        let value = signed(sum(new_s.iter().map(|&i| row[i].clone())));
        if value > current {
            current = value;
            s = new_s;
            t = new_t;
        } else {
            break;
        }
    }
    if !current.is_positive() {
        return CutCertificate {
            value: S::zero(),
            s: Vec::new(),
            t: Vec::new(),
        };
    }
    CutCertificate { value: current, s, t }
}

/// Lower bound on the cut norm from alternating maximization. Restart 0
/// starts from `S` = all parts; restart `r > 0` from a random subset drawn
/// from ChaCha stream `r`. Both signs are tried from every start.
pub fn cut_norm_heuristic<S: Scalar>(d: &StepKernel<S>, restarts: usize, seed: u64) -> CutCertificate<S> {
    let k = d.parts();
    let runs: Vec<CutCertificate<S>> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let start: Vec<usize> = if r == 0 {
                (0..k).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r as u64);
                (0..k).filter(|_| rng.gen_bool(0.5)).collect()
            };
            let a = alternate(d, start.clone(), true);
            let b = alternate(d, start, false);
            if b.value > a.value {
                b
            } else {
                a
            }
        })
        .collect();
    runs.into_iter()
        .reduce(|best, c| if c.value > best.value { c } else { best })
        .expect("at least one restart")
}

/// Cut norm of an integer `n×n` matrix, exhaustive over row subsets.
fn integer_cut_exact(d: &[i64], n: usize) -> i64 {
    let mut col = vec![0i64; n];
    let mut in_s = vec![false; n];
    let mut best = 0;
    for step in 1u64..(1u64 << n) {
        let flip = step.trailing_zeros() as usize;
        in_s[flip] = !in_s[flip];
        let row = &d[flip * n..(flip + 1) * n];
        if in_s[flip] {
            col.iter_mut().zip(row).for_each(|(c, x)| *c += x);
        } else {
            col.iter_mut().zip(row).for_each(|(c, x)| *c -= x);
        }
        let (pos, neg) = col.iter().fold((0, 0), |(p, q), &c| (p + c.max(0), q + (-c).max(0)));
        best = best.max(pos).max(neg);
    }
    best
}

fn difference_matrix(g: &Graph, h: &Graph, sigma: &[usize]) -> Vec<i64> {
    let n = g.order();
    (0..n * n)
        .map(|c| {
            let (i, j) = (c / n, c % n);
            let hv = i != j && h.has_edge(sigma[i], sigma[j]);
            let gv = i != j && g.has_edge(i, j);
            gv as i64 - hv as i64
        })
        .collect()
}

#[derive(Clone, Debug)]
pub enum CutDistanceMode {
    /// All bijections, exact cut norms. Order at most 8.
    Exact,
    /// Bijections from the edit-distance local search pool; cut norms exact
    /// up to order 16 and by alternating maximization beyond.
    Heuristic { restarts: usize, seed: u64 },
}

pub const EXACT_CUT_DISTANCE_CAP: usize = 8;

/// `min_σ ‖W_G − W_{H∘σ}‖_□` for graphs of equal order. Exact mode returns
/// the true minimum; heuristic mode an upper bound.
pub fn graph_cut_distance_same_order(g: &Graph, h: &Graph, mode: &CutDistanceMode) -> Result<Rational> {
    let n = g.order();
    if n != h.order() {
        return Err(Error::OrderMismatch(n, h.order()));
    }
    if n == 0 {
        return Ok(rational(0, 1));
    }
    let best = match mode {
        CutDistanceMode::Exact => {
            cap("graph order for exact cut distance", n, EXACT_CUT_DISTANCE_CAP)?;
            let mut best = i64::MAX;
            for_each_permutation(n, |sigma| {
                if best > 0 {
                    best = best.min(integer_cut_exact(&difference_matrix(g, h, sigma), n));
                }
            });
            best
        }
        CutDistanceMode::Heuristic { restarts, seed } => {
            let pool = editdist::local_optima(g, h, &HeuristicOptions::new(*restarts, *seed))?;
            pool.into_par_iter()
                .map(|(_, sigma)| {
                    let d = difference_matrix(g, h, &sigma);
                    if n <= DEFAULT_EXACT_CAP {
                        integer_cut_exact(&d, n)
                    } else {
                        let w = vec![rational(1, n as i64); n];
                        let vals = d
                            .chunks(n)
                            .map(|r| r.iter().map(|&x| rational(x, 1)).collect())
                            .collect();
                        let kernel = StepKernel::new(w, vals).expect("valid by construction");
                        let c = cut_norm_heuristic(&kernel, 16, *seed);
                        (c.value * rational((n * n) as i64, 1))
                            .to_integer()
                            .try_into()
                            .expect("fits")
                    }
                })
                .min()
                .expect("non-empty pool")
        }
    };
    Ok(rational(best, (n * n) as i64))
}
