//! Edit distance: exact branch and bound against multi-start local search.

use std::time::Instant;

use graphlim::editdist::{edit_distance_exact, edit_distance_heuristic, HeuristicOptions};
use graphlim::graph::erdos_renyi;

fn main() -> graphlim::error::Result<()> {
    for n in [6, 9, 12] {
        let g = erdos_renyi(n, 0.5, 10)?;
        let h = erdos_renyi(n, 0.5, 11)?;
        let start = Instant::now();
        let exact = edit_distance_exact(&g, &h)?;
        let t_exact = start.elapsed();
        let heur = edit_distance_heuristic(&g, &h, &HeuristicOptions::new(64, 0))?;
        println!(
            "n={n:>2}: exact {} mismatches ({} = {:.4}) in {t_exact:?}; local search {}",
            exact.mismatches,
            exact.exact_value(),
            exact.value,
            heur.mismatches
        );
    }
    Ok(())
}
