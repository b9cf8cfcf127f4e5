//! Triangular numbers, the Copson weight `V_n`, the lemma chain that bounds
//! it from below, and the improved Copson inequality.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::inequality::{InequalityReport, ReportFlags};
use crate::seq::FiniteSequence;
use crate::sum::{NeumaierSum, CHUNK};
use crate::weights::{keller_excess, keller_weight};

/// `S_n = n(n+1)/2`.
pub fn triangular(n: u64) -> f64 {
    let x = n as f64;
    0.5 * x * (x + 1.0)
}

/// Per-index quantities of the Copson setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopsonTerms {
    pub n: u64,
    pub s_n: f64,
    pub s_next: f64,
    /// `(sqrt(n) - sqrt(n-1)) / n`.
    pub tau: f64,
}

pub fn copson_terms(n: u64) -> CopsonTerms {
    assert!(n >= 1, "Copson terms start at n = 1");
    let x = n as f64;
    CopsonTerms {
        n,
        s_n: triangular(n),
        s_next: triangular(n + 1),
        tau: 1.0 / (x * (x.sqrt() + (x - 1.0).sqrt())),
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 1.0 && c <= 2.0 {
        Ok(())
    } else {
        Err(invalid(format!("Copson exponent c must satisfy 1 < c <= 2, got {c}")))
    }
}

/// The two coefficients `A = S_n^e/n`, `B = S_{n+1}^e/(n+1)` with `e = 2-c`,
/// together with `A - B` free of cancellation.
struct Coefficients {
    a: f64,
    b: f64,
    a_minus_b: f64,
}

fn coefficients(c: f64, n: u64) -> Coefficients {
    let e = 2.0 - c;
    let x = n as f64;
    let a = triangular(n).powf(e) / x;
    // B/A = ((n+2)/n)^e n/(n+1) = exp(t)
    let t = e * (-1.0 / ((x + 1.0) * (x + 1.0))).ln_1p() + (2.0 * e - 1.0) * (1.0 / x).ln_1p();
    let a_minus_b = -a * t.exp_m1();
    Coefficients {
        a,
        b: a - a_minus_b,
        a_minus_b,
    }
}

/// `(sqrt(n+1) - sqrt(n-1)) / sqrt(n)`.
fn sqrt_spread(n: u64) -> f64 {
    let x = 1.0 / n as f64;
    2.0 * x / ((1.0 + x).sqrt() + (1.0 - x).sqrt())
}

/// `V_n = A + B - A sqrt(1 - 1/n) - B sqrt(1 + 1/n)` with
/// `A = S_n^(2-c)/n` and `B = S_{n+1}^(2-c)/(n+1)`.
///
/// Evaluated as `(A+B)/2 * k_n + (A-B)/2 * (sqrt(n+1) - sqrt(n-1))/sqrt(n)`
/// where `k_n` is the improved Hardy weight, so both square-root pairs are
/// conjugated away.
pub fn copson_weight(c: f64, n: u64) -> Result<f64> {
    check_c(c)?;
    if n < 1 {
        return Err(invalid("weight index must be at least 1"));
    }
    Ok(copson_weight_unchecked(c, n))
}

fn copson_weight_unchecked(c: f64, n: u64) -> f64 {
    let k = coefficients(c, n);
    0.5 * (k.a + k.b) * keller_weight(n) + 0.5 * k.a_minus_b * sqrt_spread(n)
}

/// The defining four-term expression, evaluated literally.
pub fn copson_weight_naive(c: f64, n: u64) -> f64 {
    let e = 2.0 - c;
    let x = n as f64;
    let a = triangular(n).powf(e) / x;
    let b = triangular(n + 1).powf(e) / (x + 1.0);
    a + b - a * (1.0 - 1.0 / x).sqrt() - b * (1.0 + 1.0 / x).sqrt()
}

const COPSON_REFERENCE: &str =
    "improved Copson inequality sum V_n|A_n|^2 <= sum S_n^(2-c)|A_n - A_{n-1}|^2 / n, \
     comparator (c-1)^2/4 n / S_n^c";

/// Improved Copson inequality for exponent `c`. The comparator
/// `(c-1)^2/4 n/S_n^c` is below `V_n` for `c = 3/2`; other `c` are flagged
/// as unproven.
pub fn copson_report(a: &FiniteSequence, c: f64) -> Result<InequalityReport> {
    check_c(c)?;
    let unproven_range = c != 1.5;
    if a.is_zero() {
        return Ok(InequalityReport::degenerate(COPSON_REFERENCE, unproven_range));
    }
    let e = 2.0 - c;
    let m = a.support_end() as u64;
    let lhs = (1..=m + 1)
        .map(|n| {
            let d = a.get(n as usize) - a.get(n as usize - 1);
            triangular(n).powf(e) * d.norm_sqr() / n as f64
        })
        .sum::<NeumaierSum>()
        .value();
    let mut weighted = NeumaierSum::new();
    let mut classical = NeumaierSum::new();
    let k = (c - 1.0) * (c - 1.0) / 4.0;
    for n in 1..=m {
        let mag = a.get(n as usize).norm_sqr();
        if mag == 0.0 {
            continue;
        }
        weighted += copson_weight_unchecked(c, n) * mag;
        classical += k * n as f64 / triangular(n).powf(c) * mag;
    }
    let weighted_sum = weighted.value();
    let classical_sum = classical.value();
    Ok(InequalityReport {
        lhs,
        weighted_sum,
        remainder: lhs - weighted_sum,
        classical_sum,
        margin: weighted_sum - classical_sum,
        tail: None,
        flags: ReportFlags {
            degenerate: false,
            unproven_range,
            tail_bracketed: false,
        },
        reference: COPSON_REFERENCE.to_string(),
    })
}

/// The improved Copson inequality at `c = 3/2`:
/// `sum n/(16 S_n^(3/2)) |A_n|^2 < sum V_n |A_n|^2 <= sum sqrt(S_n) |A_n - A_{n-1}|^2 / n`.
pub fn improved_copson_report(a: &FiniteSequence) -> Result<InequalityReport> {
    copson_report(a, 1.5)
}

/// Sum of squares in the Copson remainder identity:
/// `sum_{n>=2} S_n^(2-c)/n |A_n ((n-1)/n)^(1/4) - A_{n-1} (n/(n-1))^(1/4)|^2`.
pub fn copson_square_sum(a: &FiniteSequence, c: f64) -> Result<f64> {
    check_c(c)?;
    let e = 2.0 - c;
    let m = a.support_end();
    Ok((2..=m + 1)
        .map(|n| {
            let x = n as f64;
            let r = (1.0 - 1.0 / x).powf(0.25);
            let d = a.get(n) * r - a.get(n - 1) / r;
            triangular(n as u64).powf(e) / x * d.norm_sqr()
        })
        .sum::<NeumaierSum>()
        .value())
}

/// `|difference side - weighted side - square sum|` for the Copson weight.
pub fn copson_identity_residual(a: &FiniteSequence, c: f64) -> Result<f64> {
    let report = copson_report(a, c)?;
    let squares = copson_square_sum(a, c)?;
    Ok((report.remainder - squares).abs())
}

/// The four lemmas bounding `V_n` from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Lemma {
    /// `S_n^(2-c)/n > S_{n+1}^(2-c)/(n+1)`.
    CoefficientsDecrease,
    /// `V_n > (A + B)/(8 n^2)`.
    WeightAboveAverage,
    /// `(A + B)/(8 n^2) > (c-1)^2/4 n/S_n^c`.
    AverageAboveComparator,
    /// `V_n > (c-1)^2/4 n/S_n^c`, the chain of the two previous bounds.
    WeightAboveComparator,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [
        Lemma::CoefficientsDecrease,
        Lemma::WeightAboveAverage,
        Lemma::AverageAboveComparator,
        Lemma::WeightAboveComparator,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Lemma::CoefficientsDecrease => "coefficients-decrease",
            Lemma::WeightAboveAverage => "weight-above-average",
            Lemma::AverageAboveComparator => "average-above-comparator",
            Lemma::WeightAboveComparator => "weight-above-comparator",
        }
    }

    pub fn statement(&self) -> &'static str {
        match self {
            Lemma::CoefficientsDecrease => "S_n^(2-c)/n > S_(n+1)^(2-c)/(n+1)",
            Lemma::WeightAboveAverage => "V_n > (S_n^(2-c)/n + S_(n+1)^(2-c)/(n+1))/(8n^2)",
            Lemma::AverageAboveComparator => {
                "(S_n^(2-c)/n + S_(n+1)^(2-c)/(n+1))/(8n^2) > (c-1)^2/4 n/S_n^c"
            }
            Lemma::WeightAboveComparator => "V_n > (c-1)^2/4 n/S_n^c",
        }
    }

    /// Whether the bound is known to hold for every `n` at this `c`.
    pub fn proven_for(&self, c: f64) -> bool {
        match self {
            Lemma::CoefficientsDecrease | Lemma::WeightAboveAverage => (1.5..=2.0).contains(&c),
            Lemma::AverageAboveComparator => c > 1.0 && c <= 1.5,
            Lemma::WeightAboveComparator => c == 1.5,
        }
    }
}

/// `lhs - rhs` and `(lhs - rhs)/|lhs|` for one lemma at one index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margin {
    pub absolute: f64,
    pub relative: f64,
}

fn margin(lhs: f64, absolute: f64) -> Margin {
    let relative = if lhs != 0.0 { absolute / lhs.abs() } else { absolute };
    Margin { absolute, relative }
}

fn lemma_margin_unchecked(lemma: Lemma, c: f64, n: u64) -> Margin {
    let k = coefficients(c, n);
    let x = n as f64;
    let comparator = || (c - 1.0) * (c - 1.0) / 4.0 * x / triangular(n).powf(c);
    match lemma {
        Lemma::CoefficientsDecrease => margin(k.a, k.a_minus_b),
        Lemma::WeightAboveAverage => {
            // V - (A+B)/(8n^2) = (A+B)/2 (k_n - 1/(4n^2)) + (A-B)/2 spread
            let v = copson_weight_unchecked(c, n);
            margin(v, 0.5 * (k.a + k.b) * keller_excess(n) + 0.5 * k.a_minus_b * sqrt_spread(n))
        }
        Lemma::AverageAboveComparator => {
            let avg = (k.a + k.b) / (8.0 * x * x);
            margin(avg, avg - comparator())
        }
        Lemma::WeightAboveComparator => {
            let v = copson_weight_unchecked(c, n);
            margin(v, v - comparator())
        }
    }
}

/// Margin of `lemma` at `(c, n)`.
pub fn lemma_margin(lemma: Lemma, c: f64, n: u64) -> Result<Margin> {
    check_c(c)?;
    if n < 1 {
        return Err(invalid("lemma index must be at least 1"));
    }
    Ok(lemma_margin_unchecked(lemma, c, n))
}

/// Scan result for one lemma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaScan {
    pub lemma: Lemma,
    pub proven: bool,
    /// Smallest relative margin over the range.
    pub min_margin: f64,
    pub argmin_n: u64,
    pub first_violation_n: Option<u64>,
    /// Absolute margin at the first violation.
    pub first_violation_margin: Option<f64>,
}

impl LemmaScan {
    /// A violation inside the proven range; exploratory findings never fail.
    pub fn failed(&self) -> bool {
        self.proven && self.first_violation_n.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub c: f64,
    pub n_min: u64,
    pub n_max: u64,
    pub scans: Vec<LemmaScan>,
}

impl LemmaReport {
    pub fn scan(&self, lemma: Lemma) -> &LemmaScan {
        self.scans.iter().find(|s| s.lemma == lemma).expect("every lemma is scanned")
    }

    pub fn failed(&self) -> bool {
        self.scans.iter().any(LemmaScan::failed)
    }
}

#[derive(Clone, Copy)]
struct Partial {
    min: f64,
    argmin: u64,
    violation: Option<(u64, f64)>,
}

impl Partial {
    fn merge(self, later: Partial) -> Partial {
        let (min, argmin) = if later.min < self.min {
            (later.min, later.argmin)
        } else {
            (self.min, self.argmin)
        };
        Partial {
            min,
            argmin,
            violation: self.violation.or(later.violation),
        }
    }
}

fn scan(lemma: Lemma, c: f64, n_max: u64) -> LemmaScan {
    let chunks = (n_max - 1) / CHUNK + 1;
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = 1 + ci * CHUNK;
            let end = (start + CHUNK - 1).min(n_max);
            let mut p = Partial {
                min: f64::INFINITY,
                argmin: start,
                violation: None,
            };
            for n in start..=end {
                let m = lemma_margin_unchecked(lemma, c, n);
                if m.relative < p.min {
                    p.min = m.relative;
                    p.argmin = n;
                }
                if p.violation.is_none() && m.absolute <= 0.0 {
                    p.violation = Some((n, m.absolute));
                }
            }
            p
        })
        .collect();
    let total = partials.into_iter().reduce(Partial::merge).expect("at least one chunk");
    LemmaScan {
        lemma,
        proven: lemma.proven_for(c),
        min_margin: total.min,
        argmin_n: total.argmin,
        first_violation_n: total.violation.map(|v| v.0),
        first_violation_margin: total.violation.map(|v| v.1),
    }
}

/// Scans every lemma over `1..=n_max` at exponent `c`.
pub fn lemma_report(c: f64, n_max: u64) -> Result<LemmaReport> {
    check_c(c)?;
    if n_max < 2 {
        return Err(invalid("lemma scan needs n_max >= 2"));
    }
    Ok(LemmaReport {
        c,
        n_min: 1,
        n_max,
        scans: Lemma::ALL.iter().map(|&l| scan(l, c, n_max)).collect(),
    })
}
