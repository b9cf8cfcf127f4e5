use num_complex::Complex64;

use discrete_hardy::gamma::{
    apply_g, apply_g_inverse, basis_expansion_error, basis_vector, gamma_norm, parallelogram_defect, witness_pair,
    GammaSpaceConfig,
};
use discrete_hardy::{FiniteSequence, WeightSeq};

fn main() -> discrete_hardy::Result<()> {
    let cfg = GammaSpaceConfig::new(3.0, WeightSeq::keller(), WeightSeq::sqrt())?;

    // G is an isometry onto l_p: pull back a finite sequence and measure it
    let y = FiniteSequence::new(2, vec![Complex64::new(1.0, -0.5), Complex64::new(0.25, 0.0), Complex64::new(-2.0, 1.0)])?;
    let x = apply_g_inverse(&y, &cfg)?;
    println!("x = G^-1 y has support {}..={}", x.offset(), x.support_end());
    println!("||x||_Gamma = {:.15}, ||y||_p = {:.15}", gamma_norm(&x, &cfg)?.norm, y.lp_norm(cfg.p));
    let back = apply_g(&x, &cfg)?.to_sequence()?;
    println!("max |G x - y| = {:.2e}", back.sub(&y).max_abs());

    for n in 0..=4 {
        println!("expansion error after {n} basis vectors: {:.6}", basis_expansion_error(&x, &cfg, n)?.norm);
    }
    println!("||u_7|| = {}", gamma_norm(&basis_vector(7, &cfg)?, &cfg)?.norm);

    // a sequence with nonzero total sum has an infinite tail, bracketed
    let z = FiniteSequence::from_real(1, &[1.0, 1.0])?;
    let v = gamma_norm(&z, &cfg)?;
    println!("||(1, 1, 0, ...)|| in [{:.12}, {:.12}]", v.bracket(cfg.p).lo, v.bracket(cfg.p).hi);

    for p in [1.5, 2.0, 3.0] {
        let unit = GammaSpaceConfig::new(p, WeightSeq::one(), WeightSeq::one())?;
        let (a, b) = witness_pair(&unit)?;
        println!("p = {p}: parallelogram defect {:+.6}", parallelogram_defect(&a, &b, &unit)?);
    }
    Ok(())
}
