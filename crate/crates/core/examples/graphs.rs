//! Generators: Turán graphs, blow-ups, isomorphism classes.

use graphlim::graph::{blow_up, nonisomorphic_graphs, turan_graph};

fn main() -> graphlim::error::Result<()> {
    let t = turan_graph(3, 10)?;
    println!(
        "T_3(10): {} vertices, {} edges, K4-free: {}",
        t.order(),
        t.size(),
        !t.contains_clique(4)
    );

    let b = blow_up(&t, 2)?;
    println!("T_3(10)[2]: {} vertices, {} edges", b.order(), b.size());

    for n in 1..=5 {
        println!(
            "graphs on {n} vertices up to isomorphism: {}",
            nonisomorphic_graphs(n)?.len()
        );
    }
    Ok(())
}
