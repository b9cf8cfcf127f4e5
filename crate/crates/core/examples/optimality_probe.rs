//! Cutoff sequences that nearly saturate the improved inequalities: the
//! remainder over the cutoff window against the claimed decay bound.

use discrete_hardy::optimality::{hardy_cutoff, remainder_sweep, ProbeKind};
use discrete_hardy::WeightSeq;

fn main() -> discrete_hardy::Result<()> {
    let cut = hardy_cutoff(10, &WeightSeq::one())?;
    let shown: Vec<String> = [1u64, 5, 10, 11, 50, 100, 101].iter().map(|&n| format!("{:.4}", cut.value(n))).collect();
    println!("cutoff N = 10 at n = 1, 5, 10, 11, 50, 100, 101: {}", shown.join(" "));

    let kinds = [
        ProbeKind::Hardy { lambda: WeightSeq::one(), beta: 0.5 },
        ProbeKind::Hardy { lambda: WeightSeq::sqrt(), beta: 0.25 },
        ProbeKind::Copson,
    ];
    for kind in &kinds {
        println!("\n{}", kind.reference());
        for p in remainder_sweep(kind, &[10, 100, 1000])? {
            println!(
                "  N = {:>5}  remainder {:>10.6}  bound {:.6}  window {:>9.6}  {}",
                p.n_cut,
                p.remainder,
                p.paper_bound,
                p.window_sum,
                match (p.bound_claimed, p.within_bound()) {
                    (false, _) => "no bound claimed",
                    (true, true) => "within bound",
                    (true, false) => "BOUND VIOLATED",
                }
            );
        }
    }
    Ok(())
}
