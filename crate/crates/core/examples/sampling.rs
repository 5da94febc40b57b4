//! W-random graphs and their density gaps as n grows.

use graphlim::graph::Graph;
use graphlim::sampler::{convergence_gap, sample_w_random};
use graphlim::scalar::rational;
use graphlim::stepgraphon::StepGraphon;

fn main() -> graphlim::error::Result<()> {
    let w = StepGraphon::new(
        vec![rational(1, 2), rational(1, 2)],
        vec![
            vec![rational(3, 4), rational(1, 4)],
            vec![rational(1, 4), rational(3, 4)],
        ],
    )?;
    let motifs = [
        Graph::complete(2),
        Graph::complete(3),
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])?,
    ];
    for n in [25, 50, 100, 200, 400] {
        let samples: Vec<Graph> = (0..5).map(|s| sample_w_random(&w, n, s)).collect::<Result<_, _>>()?;
        let gaps = convergence_gap(&samples, &w.to_f64(), &motifs)?;
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        println!("n={n:>3}: mean max-motif gap {mean:.4}");
    }
    Ok(())
}
