//! The pair whose edit distance exceeds its blow-up bound by 11/10.

use graphlim::harness::verify_example_4_1;

fn main() -> graphlim::error::Result<()> {
    for n in [24, 30] {
        let r = verify_example_4_1(n, 4, 0)?;
        println!(
            "n={n}: order {}, identity mismatches {}, blow-up mismatches {}, ratio {}",
            r.order, r.identity_mismatches, r.blowup_mismatches, r.ratio
        );
        println!(
            "  overlay from the blow-up bijection: {:.6}, local search best {}",
            r.contracted_overlay_value, r.heuristic_mismatches
        );
    }
    Ok(())
}
