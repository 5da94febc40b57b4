//! Homomorphism densities of graphs and step graphons, exactly.

use graphlim::density::{density_graph, density_graphon};
use graphlim::graph::{turan_graph, Graph};
use graphlim::scalar::{rational, Rational};
use graphlim::stepgraphon::StepGraphon;

fn main() -> graphlim::error::Result<()> {
    let k3 = Graph::complete(3);
    let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])?;

    let t = turan_graph(3, 6)?;
    let w = StepGraphon::<Rational>::embed_graph(&t)?;
    println!("t(K3, T_3(6))   = {}", density_graph(&k3, &t)?);
    println!("t(K3, W_T3(6))  = {}", density_graphon(&k3, &w)?);

    // a two-part graphon, weights 1/3 and 2/3
    let u = StepGraphon::new(
        vec![rational(1, 3), rational(2, 3)],
        vec![
            vec![rational(1, 1), rational(1, 2)],
            vec![rational(1, 2), rational(0, 1)],
        ],
    )?;
    println!(
        "t(C4, U) = {}, edge density {}",
        density_graphon(&c4, &u)?,
        u.edge_density()
    );
    Ok(())
}
