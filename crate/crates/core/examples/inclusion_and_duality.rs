//! The alternating sequence is unbounded in l_2 yet converges in the
//! Keller-weighted space; the dual test separates constant from growing `b`.

use num_complex::Complex64;

use discrete_hardy::gamma::{dual_bound, inclusion_diagnostic, GammaSpaceConfig, InclusionKind};
use discrete_hardy::WeightSeq;

fn main() -> discrete_hardy::Result<()> {
    let cfg = GammaSpaceConfig::new(2.0, WeightSeq::keller(), WeightSeq::one())?;
    let r = inclusion_diagnostic(InclusionKind::LpInWp, &cfg, &[10, 100, 1000, 10_000, 100_000])?;
    for row in &r.rows {
        println!("h = {:>6}: weighted norm {:.9}  l2 norm {:.3}", row.horizon, row.gamma_norm, row.comparison);
    }
    println!("increments: {:?}", r.increments());

    let geo = GammaSpaceConfig::new(2.0, WeightSeq::geometric(0.5)?, WeightSeq::one())?;
    let r = inclusion_diagnostic(InclusionKind::LinfInGamma, &geo, &[5, 50])?;
    let s = r.series.unwrap();
    println!("\nsum Q_n^2 gamma_n in [{:.12}, {:.12}]", s.lo, s.hi);

    let unit = GammaSpaceConfig::new(2.0, WeightSeq::one(), WeightSeq::one())?;
    for (name, b) in [
        ("constant", Box::new(|_| Complex64::new(1.0, 0.0)) as Box<dyn Fn(usize) -> Complex64 + Sync>),
        ("b_n = n", Box::new(|n| Complex64::new(n as f64, 0.0))),
        ("b_n = 2^-n", Box::new(|n| Complex64::new(0.5f64.powi(n as i32), 0.0))),
    ] {
        let d = dual_bound(b, &unit, 2000)?;
        println!("{name:<10} sup R_n = {:<12.6} slope {:+.3}  {:?}", d.sup_value, d.slope, d.trend);
    }
    Ok(())
}
