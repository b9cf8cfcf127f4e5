//! The classical Hardy inequality and the general Copson inequality on
//! sequences with infinite tails.

use discrete_hardy::inequality::{classical_hardy_report, copson_general_report};
use discrete_hardy::{FiniteSequence, WeightSeq};

fn main() -> discrete_hardy::Result<()> {
    let a = FiniteSequence::from_real(1, &[1.0, 0.5, 0.25, 0.125, 0.0625])?;
    for p in [1.5, 2.0, 4.0] {
        let r = classical_hardy_report(&a, p)?;
        let t = r.tail.unwrap();
        println!(
            "Hardy p = {p}: sum (A_n/n)^p in [{:.10}, {:.10}], bound {:.10}",
            r.lhs - t.mid() + t.lo,
            r.lhs_hi(),
            r.classical_sum
        );
    }
    for (p, c) in [(2.0, 1.5), (2.0, 2.0), (3.0, 2.0)] {
        let r = copson_general_report(&a, &WeightSeq::sqrt(), p, c)?;
        println!("Copson p = {p}, c = {c}: {:.10} <= {:.10} (margin {:.3e})", r.lhs_hi(), r.classical_sum, r.margin);
    }
    Ok(())
}
