//! The remainder in the weighted Hardy inequality is an explicit sum of
//! squares. This evaluates both sides for one sequence and shows that the
//! residual is at rounding level.

use num_complex::Complex64;

use discrete_hardy::copson::{copson_identity_residual, copson_report, copson_square_sum};
use discrete_hardy::inequality::{hardy_identity_residual, hardy_report, hardy_square_sum};
use discrete_hardy::{FiniteSequence, WeightSeq};

fn main() -> discrete_hardy::Result<()> {
    let a = FiniteSequence::from_fn(1, 40, |n| {
        let t = n as f64;
        Complex64::new((0.3 * t).sin(), (0.17 * t).cos() / t.sqrt())
    })?;

    let (lambda, g) = (WeightSeq::linear(), WeightSeq::sqrt());
    let r = hardy_report(&a, &lambda, &g)?;
    println!("Hardy, lambda = {lambda}, g = {g}");
    println!("  difference side {:.12}", r.lhs);
    println!("  weighted side   {:.12}", r.weighted_sum);
    println!("  remainder       {:.12}", r.remainder);
    println!("  sum of squares  {:.12}", hardy_square_sum(&a, &lambda, &g)?);
    println!("  residual        {:.3e}", hardy_identity_residual(&a, &lambda, &g)?);

    for c in [1.2, 1.5, 2.0] {
        let r = copson_report(&a, c)?;
        println!(
            "Copson c = {c}: remainder {:.10}, squares {:.10}, residual {:.1e}, margin {:+.4e}{}",
            r.remainder,
            copson_square_sum(&a, c)?,
            copson_identity_residual(&a, c)?,
            r.margin,
            if r.flags.unproven_range { " (exploratory)" } else { "" }
        );
    }
    Ok(())
}
