//! Delete edges from a Turán graph and measure how far it moves.

use graphlim::harness::{mean_distance_by_k, stability_csv, stability_sweep, StabilityConfig};

fn main() -> graphlim::error::Result<()> {
    let cfg = StabilityConfig::new(2, 60, 10, 7);
    let rows = stability_sweep(&cfg, &[0, 15, 30, 60, 120])?;
    for (k, mean) in mean_distance_by_k(&rows) {
        println!(
            "k={k:>3}: mean distance {mean:.5} (deficit {:.5})",
            2.0 * k as f64 / 3600.0
        );
    }
    if std::env::args().any(|a| a == "--csv") {
        print!("{}", stability_csv(&rows));
    }
    Ok(())
}
