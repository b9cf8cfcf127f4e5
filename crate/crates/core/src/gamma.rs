//! The sequence space `Gamma_p` of sequences whose weighted partial sums are
//! `p`-summable against `gamma`:
//! `||x|| = (sum_n gamma_n |q_1 a_1 + ... + q_n a_n|^p)^(1/p)`.
//!
//! The lower-triangular map `G` with `(Gx)_n = gamma_n^(1/p) A_n` is an
//! isometry onto `l_p`; its inverse is bidiagonal.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::seq::{partial_sums, Bracket, FiniteSequence, Rule, WeightSeq};
use crate::sum::NeumaierSum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Exponent `p > 1`, weights `gamma` and multipliers `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSpaceConfig {
    pub p: f64,
    pub gamma: WeightSeq,
    pub q: WeightSeq,
}

impl GammaSpaceConfig {
    pub fn new(p: f64, gamma: WeightSeq, q: WeightSeq) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(invalid(format!("Gamma_p needs p > 1, got {p}")));
        }
        Ok(Self { p, gamma, q })
    }

    /// `p / (p - 1)`.
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    fn root(&self, n: usize) -> f64 {
        self.gamma.value(n).powf(1.0 / self.p)
    }
}

/// A norm together with the bracket on its `p`-th power. The bracket is
/// degenerate when no infinite tail was involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub norm: f64,
    pub pth_power: Bracket,
}

impl NormValue {
    fn from_power(pth_power: Bracket, p: f64) -> Self {
        Self {
            norm: pth_power.mid().powf(1.0 / p),
            pth_power,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.pth_power.width() == 0.0
    }

    /// Bracket on the norm itself.
    pub fn bracket(&self, p: f64) -> Bracket {
        Bracket {
            lo: self.pth_power.lo.powf(1.0 / p),
            hi: self.pth_power.hi.powf(1.0 / p),
        }
    }
}

/// Weighted partial sums over the support and the total beyond it.
///
/// A total below the rounding level of the sum that produced it cannot be
/// told apart from zero and is treated as zero; otherwise inputs built to
/// have zero total (such as `G^-1 y`) would pick up a spurious infinite tail.
struct WeightedSums {
    prefix: Vec<Complex64>,
    total: Complex64,
}

fn weighted_sums(x: &FiniteSequence, cfg: &GammaSpaceConfig) -> Result<WeightedSums> {
    let big_a = partial_sums(x, &cfg.q)?;
    let m = x.support_end();
    let prefix: Vec<Complex64> = (1..=m).map(|n| big_a.get(n)).collect();
    let magnitude = x
        .iter()
        .map(|(n, v)| cfg.q.value(n) * v.norm())
        .sum::<NeumaierSum>()
        .value();
    let level = 2.0 * (m as f64 + 1.0) * f64::EPSILON * magnitude;
    let total = if big_a.plateau().norm() <= level { ZERO } else { big_a.plateau() };
    Ok(WeightedSums { prefix, total })
}

/// `|T|^p sum_{n>m} gamma_n`, certified.
fn plateau_tail(cfg: &GammaSpaceConfig, total: Complex64, m: usize) -> Result<Bracket> {
    if total == ZERO {
        return Ok(Bracket::exact(0.0));
    }
    Ok(cfg.gamma.tail_sum(m)?.scale(total.norm().powf(cfg.p)))
}

/// `sum_{n in range} gamma_n |A_n|^p` over the explicit prefix.
fn prefix_power(cfg: &GammaSpaceConfig, s: &WeightedSums, from: usize) -> f64 {
    s.prefix
        .iter()
        .enumerate()
        .skip(from)
        .map(|(i, v)| cfg.gamma.value(i + 1) * v.norm().powf(cfg.p))
        .sum::<NeumaierSum>()
        .value()
}

/// `||x||_{Gamma_p}`. Inputs with nonzero total weighted sum have an
/// infinite tail `|T|^p sum_{n>m} gamma_n`, bracketed from the rule of
/// `gamma`; divergent tails and tables without a tail rule are errors.
pub fn gamma_norm(x: &FiniteSequence, cfg: &GammaSpaceConfig) -> Result<NormValue> {
    let s = weighted_sums(x, cfg)?;
    let tail = plateau_tail(cfg, s.total, s.prefix.len())?;
    Ok(NormValue::from_power(tail.shift(prefix_power(cfg, &s, 0)), cfg.p))
}

/// `Gx`: explicit values over the support of `x`, then
/// `gamma_n^(1/p) T` with `T` the total weighted sum.
#[derive(Debug, Clone, PartialEq)]
pub struct GImage {
    head: Vec<Complex64>,
    total: Complex64,
    cfg: GammaSpaceConfig,
}

impl GImage {
    pub fn head(&self) -> &[Complex64] {
        &self.head
    }

    pub fn total(&self) -> Complex64 {
        self.total
    }

    pub fn get(&self, n: usize) -> Complex64 {
        if n == 0 {
            ZERO
        } else if n <= self.head.len() {
            self.head[n - 1]
        } else {
            self.total * self.cfg.root(n)
        }
    }

    /// The image as a finite sequence; fails unless the total is zero.
    pub fn to_sequence(&self) -> Result<FiniteSequence> {
        if self.total != ZERO {
            return Err(Error::NonZeroPlateau);
        }
        FiniteSequence::new(1, self.head.clone())
    }

    /// `||Gx||_p`, with the same tail policy as [`gamma_norm`].
    pub fn lp_norm(&self) -> Result<NormValue> {
        let p = self.cfg.p;
        let head = self.head.iter().map(|v| v.norm().powf(p)).sum::<NeumaierSum>().value();
        let tail = plateau_tail(&self.cfg, self.total, self.head.len())?;
        Ok(NormValue::from_power(tail.shift(head), p))
    }
}

/// `(Gx)_n = gamma_n^(1/p) (q_1 a_1 + ... + q_n a_n)`.
pub fn apply_g(x: &FiniteSequence, cfg: &GammaSpaceConfig) -> Result<GImage> {
    let s = weighted_sums(x, cfg)?;
    let head = s
        .prefix
        .iter()
        .enumerate()
        .map(|(i, v)| v * cfg.root(i + 1))
        .collect();
    Ok(GImage {
        head,
        total: s.total,
        cfg: cfg.clone(),
    })
}

/// `a_n = (gamma_n^(-1/p) b_n - gamma_{n-1}^(-1/p) b_{n-1}) / q_n` with `b_0 = 0`.
pub fn apply_g_inverse(y: &FiniteSequence, cfg: &GammaSpaceConfig) -> Result<FiniteSequence> {
    let m = y.support_end();
    cfg.gamma.check_domain(m + 1)?;
    cfg.q.check_domain(m + 1)?;
    let scaled = |n: usize| {
        if n == 0 {
            ZERO
        } else {
            y.get(n) / cfg.root(n)
        }
    };
    let first = y.offset().min(m.max(1));
    let values = (first..=m + 1)
        .map(|n| (scaled(n) - scaled(n - 1)) / cfg.q.value(n))
        .collect();
    FiniteSequence::new(first, values)
}

/// Recovers `x` from `Gx`, including images with a nonzero total.
pub fn apply_g_inverse_image(image: &GImage, cfg: &GammaSpaceConfig) -> Result<FiniteSequence> {
    let head = FiniteSequence::new(1, image.head.clone())?;
    let m = image.head.len();
    let mut x = apply_g_inverse(&head, cfg)?;
    if image.total != ZERO && m > 0 {
        // the head alone drops to zero after index m; the true image stays at T
        let fix = FiniteSequence::new(m + 1, vec![image.total / cfg.q.value(m + 1)])?;
        x = x.add(&fix);
    }
    Ok(x)
}

/// `||x+y||^2 + ||x-y||^2 - 2(||x||^2 + ||y||^2)`.
pub fn parallelogram_defect(x: &FiniteSequence, y: &FiniteSequence, cfg: &GammaSpaceConfig) -> Result<f64> {
    let sq = |v: &FiniteSequence| gamma_norm(v, cfg).map(|n| n.norm * n.norm);
    Ok(sq(&x.add(y))? + sq(&x.sub(y))? - 2.0 * (sq(x)? + sq(y)?))
}

/// The pair with `Gx = (1, 1, 0, ...)` and `Gy = (1, -1, 0, ...)`, whose
/// parallelogram defect is `8 - 4^((p+1)/p)`.
pub fn witness_pair(cfg: &GammaSpaceConfig) -> Result<(FiniteSequence, FiniteSequence)> {
    let gx = FiniteSequence::from_real(1, &[1.0, 1.0])?;
    let gy = FiniteSequence::from_real(1, &[1.0, -1.0])?;
    Ok((apply_g_inverse(&gx, cfg)?, apply_g_inverse(&gy, cfg)?))
}

/// `u_i`: `gamma_i^(-1/p)/q_i` at `i`, `-gamma_i^(-1/p)/q_{i+1}` at `i+1`.
pub fn basis_vector(i: usize, cfg: &GammaSpaceConfig) -> Result<FiniteSequence> {
    if i < 1 {
        return Err(invalid("basis index must be at least 1"));
    }
    cfg.gamma.check_domain(i)?;
    cfg.q.check_domain(i + 1)?;
    let s = 1.0 / cfg.root(i);
    FiniteSequence::from_real(i, &[s / cfg.q.value(i), -s / cfg.q.value(i + 1)])
}

/// `||x - sum_{i<=n} (Gx)_i u_i||`, which equals
/// `(sum_{k>n} gamma_k |A_k|^p)^(1/p)`.
pub fn basis_expansion_error(x: &FiniteSequence, cfg: &GammaSpaceConfig, n: usize) -> Result<NormValue> {
    let s = weighted_sums(x, cfg)?;
    let m = s.prefix.len();
    let tail = plateau_tail(cfg, s.total, m.max(n))?;
    Ok(NormValue::from_power(tail.shift(prefix_power(cfg, &s, n.min(m))), cfg.p))
}

/// The partial expansion `sum_{i<=n} (Gx)_i u_i` itself.
pub fn basis_expansion(x: &FiniteSequence, cfg: &GammaSpaceConfig, n: usize) -> Result<FiniteSequence> {
    let image = apply_g(x, cfg)?;
    let mut acc = FiniteSequence::zero();
    for i in 1..=n {
        let c = image.get(i);
        if c != ZERO {
            acc = acc.add(&basis_vector(i, cfg)?.scale(c));
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    BoundedLooking,
    Growing,
}

/// Slope of `log R` against `log n` above which the row functional is
/// reported as growing.
const GROWTH_SLOPE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualBoundReport {
    pub horizon: usize,
    pub sup_value: f64,
    pub argmax_n: usize,
    /// `log(R_h / R_{h/10}) / log 10` over the last decade.
    pub slope: f64,
    pub trend: Trend,
    /// `R_1, ..., R_horizon`.
    #[serde(skip)]
    pub rows: Vec<f64>,
}

/// Row functional of the associate-space test:
/// `R_n = (sum_{k<n} |gamma_k^(-1/p)(b_k - b_{k+1})|^q + |gamma_n^(-1/p) b_n|^q)^(1/q)`
/// with `q = p/(p-1)`, for `n <= horizon`.
pub fn dual_bound(
    b: impl Fn(usize) -> Complex64,
    cfg: &GammaSpaceConfig,
    horizon: usize,
) -> Result<DualBoundReport> {
    if horizon < 2 {
        return Err(invalid("dual bound needs horizon >= 2"));
    }
    cfg.gamma.check_domain(horizon)?;
    let qs = cfg.conjugate();
    let mut diffs = NeumaierSum::new();
    let mut rows = Vec::with_capacity(horizon);
    let mut b_n = b(1);
    for n in 1..=horizon {
        let r = 1.0 / cfg.root(n);
        let last = (b_n * r).norm().powf(qs);
        rows.push((diffs.value() + last).powf(1.0 / qs));
        if n < horizon {
            let b_next = b(n + 1);
            diffs += ((b_n - b_next) * r).norm().powf(qs);
            b_n = b_next;
        }
    }
    let (argmax, sup) = rows
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(ai, av), (i, &v)| if v > av { (i, v) } else { (ai, av) });
    let back = (horizon / 10).max(1);
    let (hi, lo) = (rows[horizon - 1], rows[back - 1]);
    let slope = if hi > 0.0 && lo > 0.0 {
        (hi / lo).ln() / (horizon as f64 / back as f64).ln()
    } else {
        0.0
    };
    Ok(DualBoundReport {
        horizon,
        sup_value: sup,
        argmax_n: argmax + 1,
        slope,
        trend: if slope > GROWTH_SLOPE { Trend::Growing } else { Trend::BoundedLooking },
        rows,
    })
}

/// [`dual_bound`] for a finitely supported `b`.
pub fn dual_bound_sequence(b: &FiniteSequence, cfg: &GammaSpaceConfig, horizon: usize) -> Result<DualBoundReport> {
    dual_bound(|n| b.get(n), cfg, horizon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InclusionKind {
    /// `x = (-1)^n`: bounded space norm, divergent `p`-norm.
    LpInWp,
    /// Bounded `x`: norm at most `sup|x| (sum Q_n^p gamma_n)^(1/p)`.
    LinfInGamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InclusionRow {
    pub horizon: usize,
    pub gamma_norm: f64,
    /// The `p`-norm of the truncated witness, or the bound it must respect.
    pub comparison: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub kind: InclusionKind,
    pub rows: Vec<InclusionRow>,
    /// Bracket on `sum Q_n^p gamma_n` for the bounded-input diagnostic.
    pub series: Option<Bracket>,
}

impl InclusionReport {
    /// Successive increments of the space norm.
    pub fn increments(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[1].gamma_norm - w[0].gamma_norm).collect()
    }
}

/// Certified bracket on `sum_{n>=1} Q_n^p gamma_n`, summed through `h` and
/// bounded beyond from envelopes `Q_n <= K n^k` and the rule of `gamma`.
pub fn cumulative_series(cfg: &GammaSpaceConfig, h: usize) -> Result<Bracket> {
    let p = cfg.p;
    cfg.gamma.check_domain(h)?;
    cfg.q.check_domain(h)?;
    let partial = cfg
        .q
        .cumulative_prefix(h)
        .iter()
        .enumerate()
        .map(|(i, qq)| qq.powf(p) * cfg.gamma.value(i + 1))
        .sum::<NeumaierSum>()
        .value();
    let (big_k, k) = cfg.q.cumulative_envelope().ok_or_else(|| {
        Error::TailNotComputable(format!("no growth envelope for q = {}", cfg.q))
    })?;
    let kp = big_k.powf(p);
    let diverges = || Error::Hypothesis(format!("sum Q_n^p gamma_n diverges for q = {}, gamma = {}", cfg.q, cfg.gamma));
    let tail = match cfg.gamma.rule() {
        Rule::Geometric(r) if *r < 1.0 => {
            // successive terms shrink at least by rho past h
            let a = (h + 1) as f64;
            let rho = ((a + 1.0) / a).powf(k * p) * r;
            if rho >= 1.0 {
                return Err(diverges());
            }
            kp * a.powf(k * p) * r.powf(a) / (1.0 - rho)
        }
        _ => {
            let (c, s) = cfg.gamma.power_envelope().ok_or_else(|| {
                Error::TailNotComputable(format!("no decay envelope for gamma = {}", cfg.gamma))
            })?;
            let e = k * p + s;
            if e >= -1.0 {
                return Err(diverges());
            }
            kp * c * crate::seq::power_tail(h, e).hi
        }
    };
    Ok(Bracket {
        lo: partial,
        hi: partial + tail,
    })
}

/// Norms of the witness sequences truncated at each horizon.
pub fn inclusion_diagnostic(
    kind: InclusionKind,
    cfg: &GammaSpaceConfig,
    horizons: &[usize],
) -> Result<InclusionReport> {
    if horizons.is_empty() {
        return Err(invalid("inclusion diagnostic needs at least one horizon"));
    }
    let p = cfg.p;
    match kind {
        InclusionKind::LpInWp => {
            let rows = horizons
                .iter()
                .map(|&h| {
                    let values: Vec<f64> = (1..=h).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
                    let x = FiniteSequence::from_real(1, &values)?;
                    let lp = if p == 2.0 { (h as f64).sqrt() } else { (h as f64).powf(1.0 / p) };
                    Ok(InclusionRow {
                        horizon: h,
                        gamma_norm: gamma_norm(&x, cfg)?.norm,
                        comparison: lp,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(InclusionReport { kind, rows, series: None })
        }
        InclusionKind::LinfInGamma => {
            let h_max = *horizons.iter().max().expect("non-empty");
            let series = cumulative_series(cfg, h_max)?;
            let bound = series.hi.powf(1.0 / p);
            let rows = horizons
                .iter()
                .map(|&h| {
                    let x = FiniteSequence::from_real(1, &vec![1.0; h])?;
                    Ok(InclusionRow {
                        horizon: h,
                        gamma_norm: gamma_norm(&x, cfg)?.norm,
                        comparison: bound,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(InclusionReport { kind, rows, series: Some(series) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit_cfg(p: f64) -> GammaSpaceConfig {
        GammaSpaceConfig::new(p, WeightSeq::one(), WeightSeq::one()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(GammaSpaceConfig::new(1.0, WeightSeq::one(), WeightSeq::one()).is_err());
    }

    #[test]
    fn basis_vectors_have_unit_norm() {
        let cfg = unit_cfg(2.0);
        let u2 = basis_vector(2, &cfg).unwrap();
        assert_eq!(u2, FiniteSequence::from_real(2, &[1.0, -1.0]).unwrap());
        let n = gamma_norm(&u2, &cfg).unwrap();
        assert_eq!(n.norm, 1.0);
        assert!(n.is_exact());
        let g = apply_g(&u2, &cfg).unwrap();
        assert_eq!(g.to_sequence().unwrap(), FiniteSequence::from_real(2, &[1.0]).unwrap());
    }

    #[test]
    fn zero_has_zero_norm() {
        assert_eq!(gamma_norm(&FiniteSequence::zero(), &unit_cfg(3.0)).unwrap().norm, 0.0);
        assert!(apply_g_inverse(&FiniteSequence::zero(), &unit_cfg(3.0)).unwrap().is_zero());
    }

    #[test]
    fn unit_input_brackets_zeta_two() {
        let cfg = GammaSpaceConfig::new(2.0, WeightSeq::power(-2.0).unwrap(), WeightSeq::one()).unwrap();
        let x = FiniteSequence::from_real(1, &[1.0]).unwrap();
        let n = gamma_norm(&x, &cfg).unwrap();
        assert!(n.pth_power.contains(PI * PI / 6.0));
        assert!(!n.is_exact());
    }

    #[test]
    fn nonzero_total_needs_a_summable_tail() {
        let x = FiniteSequence::from_real(1, &[1.0]).unwrap();
        assert!(matches!(gamma_norm(&x, &unit_cfg(2.0)), Err(Error::TailDivergent(_))));
        let table = WeightSeq::table(vec![1.0, 0.5], None).unwrap();
        let cfg = GammaSpaceConfig::new(2.0, table, WeightSeq::one()).unwrap();
        assert!(matches!(gamma_norm(&x, &cfg), Err(Error::TailNotComputable(_))));
    }

    #[test]
    fn image_with_plateau() {
        let x = FiniteSequence::from_real(1, &[1.0]).unwrap();
        let g = apply_g(&x, &unit_cfg(2.0)).unwrap();
        assert_eq!(g.head(), &[c(1.0)]);
        assert_eq!(g.get(57), c(1.0));
        assert!(g.to_sequence().is_err());
        assert_eq!(apply_g_inverse_image(&g, &unit_cfg(2.0)).unwrap(), x);
    }

    #[test]
    fn inverse_of_first_unit_vector() {
        let y = FiniteSequence::from_real(1, &[1.0]).unwrap();
        let a = apply_g_inverse(&y, &unit_cfg(2.0)).unwrap();
        assert_eq!(a, FiniteSequence::from_real(1, &[1.0, -1.0]).unwrap());
    }

    #[test]
    fn witness_pair_defect() {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let cfg = unit_cfg(p);
            let (x, y) = witness_pair(&cfg).unwrap();
            let d = parallelogram_defect(&x, &y, &cfg).unwrap();
            let expect = 8.0 - 4f64.powf((p + 1.0) / p);
            assert!((d - expect).abs() <= 1e-12, "p={p}");
        }
        assert!((8.0 - 4f64.powf(4.0 / 3.0) - 1.65040).abs() < 1e-5);
    }

    #[test]
    fn dual_bound_examples() {
        let cfg = unit_cfg(2.0);
        let r = dual_bound(|_| c(3.0), &cfg, 1000).unwrap();
        assert!(r.rows.iter().all(|v| (v - 3.0).abs() < 1e-12));
        assert_eq!(r.trend, Trend::BoundedLooking);
        let r = dual_bound(|n| c(n as f64), &cfg, 1000).unwrap();
        for (i, v) in r.rows.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((v * v - (n - 1.0 + n * n)).abs() < 1e-9 * n * n);
        }
        assert_eq!(r.trend, Trend::Growing);
        assert_eq!(r.argmax_n, 1000);
        let r = dual_bound(|n| c(0.5f64.powi(n as i32)), &cfg, 200).unwrap();
        // R_1 = |b_1| is the sup; R_n -> (sum_{k>=1} 4^-(k+1))^(1/2) = 12^(-1/2)
        assert_eq!(r.sup_value, 0.5);
        assert!((r.rows[199] - (1.0f64 / 12.0).sqrt()).abs() < 1e-12);
        assert_eq!(r.trend, Trend::BoundedLooking);
    }

    #[test]
    fn dual_rows_can_decrease() {
        let b = FiniteSequence::from_real(1, &[1.0, 0.5]).unwrap();
        let r = dual_bound_sequence(&b, &unit_cfg(2.0), 3).unwrap();
        assert!(r.rows[1] < r.rows[0]);
        assert_eq!(r.argmax_n, 1);
    }

    #[test]
    fn keller_witness_diagnostic() {
        let cfg = GammaSpaceConfig::new(2.0, WeightSeq::keller(), WeightSeq::one()).unwrap();
        let r = inclusion_diagnostic(InclusionKind::LpInWp, &cfg, &[100, 1000, 10_000]).unwrap();
        assert_eq!(r.rows[0].comparison, 10.0);
        assert_eq!(r.rows[2].comparison, 100.0);
        let inc = r.increments();
        assert!(inc.iter().all(|d| *d > 0.0));
        assert!(inc[1] < inc[0] / 2.0);
    }

    #[test]
    fn bounded_input_diagnostics() {
        let cfg = GammaSpaceConfig::new(2.0, WeightSeq::geometric(0.5).unwrap(), WeightSeq::one()).unwrap();
        let r = inclusion_diagnostic(InclusionKind::LinfInGamma, &cfg, &[10, 100]).unwrap();
        // sum n^2 2^-n = 6
        let s = r.series.unwrap();
        assert!(s.lo <= 6.0 + 1e-12 && 6.0 <= s.hi + 1e-12);
        assert!(r.rows.iter().all(|row| row.gamma_norm <= row.comparison));
        let cfg = GammaSpaceConfig::new(2.0, WeightSeq::power(-1.0).unwrap(), WeightSeq::one()).unwrap();
        assert!(matches!(
            inclusion_diagnostic(InclusionKind::LinfInGamma, &cfg, &[10]),
            Err(Error::Hypothesis(_))
        ));
    }

    fn config() -> impl Strategy<Value = GammaSpaceConfig> {
        (1.2f64..4.0, -3.0f64..1.0, -1.0f64..1.0).prop_map(|(p, g, q)| {
            GammaSpaceConfig::new(p, WeightSeq::power(g).unwrap(), WeightSeq::power(q).unwrap()).unwrap()
        })
    }

    fn sequence() -> impl Strategy<Value = FiniteSequence> {
        (1usize..5, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30)).prop_map(|(off, v)| {
            FiniteSequence::new(off, v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn g_after_inverse_is_identity(y in sequence(), cfg in config()) {
            let x = apply_g_inverse(&y, &cfg).unwrap();
            let back = apply_g(&x, &cfg).unwrap().to_sequence().unwrap();
            let err = back.sub(&y).max_abs();
            prop_assert!(err <= 1e-12 * y.max_abs().max(1.0));
        }

        #[test]
        fn isometry_and_split(y in sequence(), cfg in config(), n in 0usize..40) {
            let x = apply_g_inverse(&y, &cfg).unwrap();
            let norm = gamma_norm(&x, &cfg).unwrap();
            prop_assert!(norm.is_exact());
            let lp = y.lp_norm(cfg.p);
            prop_assert!((norm.norm - lp).abs() <= 1e-12 * lp.max(1e-300));
            let err = basis_expansion_error(&x, &cfg, n).unwrap().pth_power.mid();
            let head = apply_g(&x, &cfg).unwrap();
            let kept: f64 = (1..=n).map(|k| head.get(k).norm().powf(cfg.p)).sum();
            let total = norm.pth_power.mid();
            prop_assert!((err + kept - total).abs() <= 1e-12 * total.max(1e-300));
        }

        #[test]
        fn basis_unit_norm(i in 1usize..100, cfg in config()) {
            let u = basis_vector(i, &cfg).unwrap();
            prop_assert!((gamma_norm(&u, &cfg).unwrap().norm - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn expansion_error_matches_direct_difference(y in sequence(), n in 0usize..40) {
            let cfg = GammaSpaceConfig::new(2.0, WeightSeq::power(-1.5).unwrap(), WeightSeq::sqrt()).unwrap();
            let x = apply_g_inverse(&y, &cfg).unwrap();
            let rest = x.sub(&basis_expansion(&x, &cfg, n).unwrap());
            let direct = gamma_norm(&rest, &cfg).unwrap().norm;
            let formula = basis_expansion_error(&x, &cfg, n).unwrap().norm;
            prop_assert!((direct - formula).abs() <= 1e-10 * y.max_abs().max(1.0));
        }

        #[test]
        fn parallelogram_law_at_two(a in sequence(), b in sequence()) {
            let cfg = GammaSpaceConfig::new(2.0, WeightSeq::power(-0.5).unwrap(), WeightSeq::linear()).unwrap();
            let x = apply_g_inverse(&a, &cfg).unwrap();
            let y = apply_g_inverse(&b, &cfg).unwrap();
            let d = parallelogram_defect(&x, &y, &cfg).unwrap();
            let scale = a.lp_norm(2.0).powi(2) + b.lp_norm(2.0).powi(2);
            prop_assert!(d.abs() <= 1e-10 * scale.max(1.0));
        }

        #[test]
        fn triangle_inequality(a in sequence(), b in sequence(), cfg in config()) {
            let x = apply_g_inverse(&a, &cfg).unwrap();
            let y = apply_g_inverse(&b, &cfg).unwrap();
            let n = |v: &FiniteSequence| gamma_norm(v, &cfg).unwrap().norm;
            prop_assert!(n(&x.add(&y)) <= n(&x) + n(&y) + 1e-12);
        }
    }
}
