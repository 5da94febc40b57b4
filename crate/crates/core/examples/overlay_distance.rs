//! Fractional overlay distance: bounds, blow-ups and permutation averaging.

use graphlim::editdist::HeuristicOptions;
use graphlim::fracdist::{
    birkhoff_approximate, delta1_blowup_upper, delta1_lower, delta1_upper, factor3_check, Delta1Config, EditMode,
    Factor3Options,
};
use graphlim::graph::{erdos_renyi, turan_graph, Graph};

fn main() -> graphlim::error::Result<()> {
    // complete bipartite graphs of different orders are at overlay distance 0
    let (k22, k33) = (turan_graph(2, 4)?, turan_graph(2, 6)?);
    let up = delta1_upper(&k22, &k33, &Delta1Config::default())?;
    println!(
        "K22 vs K33: upper {:.2e} (start {}), lower {}",
        up.value,
        up.start,
        delta1_lower(&k22, &k33)
    );

    let (p3, k2) = (Graph::from_edges(3, [(0, 1), (1, 2)])?, Graph::complete(2));
    let via_blowup = delta1_blowup_upper(&p3, &k2, 2, &EditMode::Auto(HeuristicOptions::default()))?;
    println!(
        "P3 vs K2: conditional gradient {:.4}, blow-up bound {:.4}",
        delta1_upper(&p3, &k2, &Delta1Config::default())?.value,
        via_blowup.value
    );

    let (g, h) = (erdos_renyi(7, 0.5, 3)?, erdos_renyi(7, 0.5, 4)?);
    let r = factor3_check(&g, &h, &Factor3Options::default())?;
    println!(
        "edit {:.4} vs overlay upper {:.4}: ratio {}",
        r.edit.value,
        r.delta1_upper,
        r.ratio_text()
    );

    let best = delta1_upper(&g, &h, &Delta1Config::default())?;
    let perms = birkhoff_approximate(&best.overlay, 200)?;
    println!(
        "best overlay as an average of 200 permutations: residual {:.2e} <= {:.2e}",
        perms.residual_inf_norm, perms.bound
    );
    Ok(())
}
