//! Densest weightings of clique and path templates.

use graphlim::extremal::{
    clique_density_optimize, degree_regularity_gap, l1_to_multipartite, template_graphon, OptimizeOptions,
};
use graphlim::graph::Graph;

fn main() -> graphlim::error::Result<()> {
    for r in 2..=6 {
        let opt = clique_density_optimize(&Graph::complete(r), &OptimizeOptions::default())?;
        let w = template_graphon(&Graph::complete(r), &opt.weights)?;
        println!(
            "K{r}: density {:.9} (target {:.9}), regularity gap {:.1e}, distance to {r}-partite {:.1e}",
            opt.value,
            (r - 1) as f64 / r as f64,
            degree_regularity_gap(&w),
            l1_to_multipartite(&w, r)?.distance
        );
    }
    let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)])?;
    let opt = clique_density_optimize(&path, &OptimizeOptions::default())?;
    println!("P4: density {:.6} at {:?}", opt.value, opt.weights);
    Ok(())
}
