//! W-random graphs from step graphons, and density-based convergence gaps.
//!
//! Within a part a step graphon is constant, so a point `x_i ∈ [0,1]` is
//! recorded only by the part it falls in. Randomness comes from ChaCha8
//! streams of the master seed: stream 0 draws the parts, and stream `i + 1`
//! draws the Bernoulli trials of pairs `{i, j}` with `j > i`. Rows are
//! therefore independent and can be generated in parallel with identical
//! output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{density_graph, density_graphon};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::stepgraphon::StepGraphon;

/// Part of each of `n` i.i.d. points, part `i` drawn with probability `λ_i`.
pub fn sample_parts<S: Scalar>(w: &StepGraphon<S>, n: usize, seed: u64) -> Vec<usize> {
    let mut cumulative = Vec::with_capacity(w.parts());
    let mut acc = 0.0;
    for l in w.weights() {
        acc += l.to_f64();
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen::<f64>() * acc;
            cumulative.partition_point(|&c| c <= u).min(w.parts() - 1)
        })
        .collect()
}

/// G(n, W): points drawn by part, then each pair joined independently with
/// probability `W(part_i, part_j)`. Values 0 and 1 are honoured surely.
pub fn sample_w_random<S: Scalar>(w: &StepGraphon<S>, n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample order must be at least 1".into()));
    }
    let parts = sample_parts(w, n, seed);
    let k = w.parts();
    let p: Vec<f64> = (0..k * k).map(|c| w.value(c / k, c % k).to_f64()).collect();
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            (i + 1..n)
                .filter(|&j| rng.gen::<f64>() < p[parts[i] * k + parts[j]])
                .collect()
        })
        .collect();
    Graph::from_edges(
        n,
        rows.into_iter()
            .enumerate()
            .flat_map(|(i, js)| js.into_iter().map(move |j| (i, j))),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct GapRow {
    pub graph: usize,
    pub motif: usize,
    pub gap: f64,
}

/// `|t(F, g) − t(F, W)|` for every graph and motif, graph-major.
pub fn convergence_table<S: Scalar>(gs: &[Graph], w: &StepGraphon<S>, motifs: &[Graph]) -> Result<Vec<GapRow>> {
    Ok(gaps(gs, w, motifs)?
        .into_iter()
        .enumerate()
        .flat_map(|(gi, row)| {
            row.into_iter().enumerate().map(move |(mi, gap)| GapRow {
                graph: gi,
                motif: mi,
                gap: gap.to_f64(),
            })
        })
        .collect())
}

fn gaps<S: Scalar>(gs: &[Graph], w: &StepGraphon<S>, motifs: &[Graph]) -> Result<Vec<Vec<S>>> {
    let target = motifs
        .iter()
        .map(|f| density_graphon(f, w))
        .collect::<Result<Vec<S>>>()?;
    gs.par_iter()
        .map(|g| {
            motifs
                .iter()
                .zip(&target)
                .map(|(f, t)| Ok((S::from_rational(&density_graph(f, g)?) - t.clone()).abs()))
                .collect()
        })
        .collect()
}

/// For each graph, `max_F |t(F, g) − t(F, W)|` over the motifs (zero when
/// there are no motifs).
pub fn convergence_gap<S: Scalar>(gs: &[Graph], w: &StepGraphon<S>, motifs: &[Graph]) -> Result<Vec<S>> {
    Ok(gaps(gs, w, motifs)?
        .into_iter()
        .map(|row| row.into_iter().fold(S::zero(), |a, b| if b > a { b } else { a }))
        .collect())
}
