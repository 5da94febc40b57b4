//! Cut norm of the difference of two step graphons, and the cut distance
//! between small graphs.

use graphlim::cutnorm::{
    cut_norm_exact, cut_norm_heuristic, graph_cut_distance_same_order, CutDistanceMode, StepKernel,
};
use graphlim::graph::{erdos_renyi, turan_graph};
use graphlim::scalar::{rational, Rational};
use graphlim::stepgraphon::StepGraphon;

fn main() -> graphlim::error::Result<()> {
    let half = StepGraphon::constant(rational(1, 2))?;
    let bip = StepGraphon::<Rational>::balanced_multipartite(2)?;
    let d = StepKernel::difference(&half, &bip);

    let exact = cut_norm_exact(&d)?;
    println!("||1/2 - K_2||_cut = {} on S={:?} T={:?}", exact.value, exact.s, exact.t);
    println!("heuristic: {}", cut_norm_heuristic(&d, 16, 0).value);
    println!("l1 norm:   {}", d.l1_norm());

    let g = turan_graph(2, 7)?;
    let h = erdos_renyi(7, 0.5, 1)?;
    let dist = graph_cut_distance_same_order(&g, &h, &CutDistanceMode::Exact)?;
    println!("cut distance T_2(7) vs G(7, 1/2): {dist}");
    Ok(())
}
