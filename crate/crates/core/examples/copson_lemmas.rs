//! Scans the four lower bounds for the Copson weight over a grid of
//! exponents and reports where each one first fails.

use discrete_hardy::copson::{lemma_report, Lemma};

fn main() -> discrete_hardy::Result<()> {
    println!("{:>5} {:<26} {:>8} {:>14} {:>10}", "c", "bound", "proven", "min rel margin", "fails at");
    for i in 0..=9 {
        let c = 1.1 + 0.1 * i as f64;
        let report = lemma_report(c, 100_000)?;
        for lemma in Lemma::ALL {
            let s = report.scan(lemma);
            println!(
                "{c:>5.2} {:<26} {:>8} {:>14.4e} {:>10}",
                lemma.id(),
                s.proven,
                s.min_margin,
                s.first_violation_n.map_or("-".to_string(), |n| n.to_string())
            );
        }
    }
    Ok(())
}
