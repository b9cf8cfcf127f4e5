//! Improved weights next to their classical comparators, and what the
//! textbook subtraction form does to the Keller weight at large `n`.

use discrete_hardy::weights::{improvement_margin, keller_weight, keller_weight_naive, WeightFamily};
use discrete_hardy::WeightSeq;

fn main() -> discrete_hardy::Result<()> {
    let families = [
        WeightFamily::Keller,
        WeightFamily::LambdaG {
            lambda: WeightSeq::power(0.1)?,
            g: WeightSeq::power(0.25)?,
        },
        WeightFamily::Power { alpha: 0.5, beta: 0.25 },
        WeightFamily::Fischer { p: 3.0 },
        WeightFamily::Copson { c: 1.5 },
    ];
    println!("{:<10} {:>8} {:>14} {:>14} {:>12}", "family", "n", "weight", "comparator", "margin/bound");
    for family in &families {
        for n in [1, 10, 1000, 100_000] {
            let w = improvement_margin(family, n)?;
            println!(
                "{:<10} {:>8} {:>14.6e} {:>14.6e} {:>12.3e}",
                family.name(),
                n,
                w.value,
                w.classical_bound,
                w.margin / w.classical_bound
            );
        }
    }

    println!("\nKeller weight, stable vs naive:");
    for n in [1_000u64, 1_000_000, 1_000_000_000] {
        println!("  n = {n:>10}: {:.16e}  {:.16e}", keller_weight(n), keller_weight_naive(n));
    }
    Ok(())
}
