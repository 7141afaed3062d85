//! Exact integer check of the dyadic telescoping identity and the parity rule.

use simplexht::dyadic::{enumerate_tuples, verify_dyadic_telescoping, verify_parity_rule};

fn main() -> simplexht::Result<()> {
    for n in 1..=3 {
        for k in 1..=n {
            for l in 2..=3 {
                let r = verify_dyadic_telescoping(n, k, l, 3)?;
                println!(
                    "n={n} k={k} l={l}: {} points, {} nonzero, max discrepancy {}",
                    r.points, r.support, r.max_discrepancy
                );
            }
        }
    }

    let t = &enumerate_tuples(1, 3, 2)[5];
    for sides in [[0u8, 0, 0], [1, 1, 0], [1, 0, 0], [1, 1, 1]] {
        println!("children {sides:?} of {:?}: balanced = {}", t.indices(), verify_parity_rule(t, &sides)?);
    }
    Ok(())
}
