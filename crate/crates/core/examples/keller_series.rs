//! Exact coefficients of the Keller weight in powers of `1/n^2`, and how
//! fast the truncated series approaches the weight.

use discrete_hardy::weights::{
    keller_series_coefficient, keller_series_partial, keller_series_remainder_bound, keller_weight, series_expansion,
};
use discrete_hardy::WeightSeq;

fn main() -> discrete_hardy::Result<()> {
    for m in 1..=6 {
        println!("c_{m} = {}", keller_series_coefficient(m)?);
    }
    for n in [2u64, 10, 100] {
        let w = keller_weight(n);
        println!("\nn = {n}, weight {w:.17e}");
        for order in 1..=4 {
            let s = keller_series_partial(n, order)?;
            println!(
                "  order {order}: gap {:.3e}, remainder bound {:.3e}",
                w - s,
                keller_series_remainder_bound(n, order)?
            );
        }
    }
    let lambda = WeightSeq::linear();
    println!(
        "\nw_n(n, 1/2) near n = 1000, three-term expansion: {:.12e}",
        series_expansion(&lambda, 0.5, 1000, 3)?
    );
    Ok(())
}
