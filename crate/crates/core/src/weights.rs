//! Hardy-type weight sequences.
//!
//! Every textbook formula here subtracts nearly equal square roots or powers
//! and loses all significant digits once `n` is large. Each family is
//! evaluated through a rewritten form that keeps full relative precision:
//!
//! * Keller: `2x^2 / ((2 + s)(1 + sqrt(1 - x^2)))` with `x = 1/n` and
//!   `s = sqrt(1 - x) + sqrt(1 + x)`.
//! * `(lambda, g)` weights: split into the symmetric part
//!   `(1/l_n + 1/l_{n+1}) (2 - g_{n-1}/g_n - g_{n+1}/g_n) / 2` and the
//!   antisymmetric part `(1/l_n - 1/l_{n+1}) (g_{n+1} - g_{n-1}) / (2 g_n)`;
//!   power-law `g` get an `expm1`/`atanh` form for the second difference.
//! * Power and Fischer weights: `log1p`/`expm1` forms built on the same
//!   second difference.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::copson;
use crate::error::{invalid, Result};
use crate::seq::{power_second_difference, WeightSeq};

/// Improved Hardy weight `w_n = 2 - sqrt(1 - 1/n) - sqrt(1 + 1/n)`.
pub fn keller_weight(n: u64) -> f64 {
    debug_assert!(n >= 1);
    let x = 1.0 / n as f64;
    let s = (1.0 - x).sqrt() + (1.0 + x).sqrt();
    let r = (1.0 - x * x).sqrt();
    2.0 * x * x / ((2.0 + s) * (1.0 + r))
}

/// The textbook subtraction form, kept to document the cancellation.
pub fn keller_weight_naive(n: u64) -> f64 {
    let x = 1.0 / n as f64;
    2.0 - (1.0 - x).sqrt() - (1.0 + x).sqrt()
}

/// `w_n - 1/(4 n^2)`, evaluated as a sum of positive terms.
pub fn keller_excess(n: u64) -> f64 {
    let x = 1.0 / n as f64;
    let r = (1.0 - x * x).sqrt();
    let delta = x * x / (1.0 + r);
    let s = (1.0 - x).sqrt() + (1.0 + x).sqrt();
    // 2 - s = delta / (1 + sqrt(1 - delta/2))
    let two_minus_s = delta / (1.0 + (1.0 - 0.5 * delta).sqrt());
    x * x * (4.0 * delta + two_minus_s * (2.0 - delta)) / (4.0 * (2.0 + s) * (1.0 + r))
}

/// `w_n(g) = 2 - g_{n-1}/g_n - g_{n+1}/g_n` with `g_0 = 0`. May be negative.
pub fn g_weight(g: &WeightSeq, n: usize) -> Result<f64> {
    lambda_g_weight(&WeightSeq::one(), g, n)
}

/// `w_n(l, g) = 1/l_n + 1/l_{n+1} - g_{n-1}/(l_n g_n) - g_{n+1}/(l_{n+1} g_n)`.
pub fn lambda_g_weight(lambda: &WeightSeq, g: &WeightSeq, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(invalid("weight index must be at least 1"));
    }
    lambda.check_domain(n + 1)?;
    g.check_domain(n + 1)?;
    Ok(lambda_g_unchecked(lambda, g, n))
}

pub(crate) fn lambda_g_unchecked(lambda: &WeightSeq, g: &WeightSeq, n: usize) -> f64 {
    let sym = 1.0 / lambda.value(n) + 1.0 / lambda.value(n + 1);
    let anti = lambda.reciprocal_difference(n);
    let mut w = 0.5 * sym * g.second_difference_ratio(n);
    if anti != 0.0 {
        w += 0.5 * anti * g.spread_ratio(n);
    }
    w
}

/// Power weight `w_n(alpha, beta)`; `n = 1` uses `1 + 2^a - 2^(a+b)`.
pub fn power_weight(alpha: f64, beta: f64, n: u64) -> f64 {
    debug_assert!(n >= 1);
    if n == 1 {
        return 1.0 + 2f64.powf(alpha) - 2f64.powf(alpha + beta);
    }
    let x = 1.0 / n as f64;
    let lp = x.ln_1p();
    // 1 + (1+x)^a - (1-x)^b - (1+x)^(a+b)
    //   = [2 - (1-x)^b - (1+x)^b] - ((1+x)^a - 1)((1+x)^b - 1)
    let bracket = power_second_difference(beta, x) - (alpha * lp).exp_m1() * (beta * lp).exp_m1();
    (n as f64).powf(alpha) * bracket
}

/// Fischer weight for general `p > 1`:
/// `(1 - ((n-1)/n)^r)^(p-1) - (((n+1)/n)^r - 1)^(p-1)` with `r = (p-1)/p`.
pub fn fischer_weight(p: f64, n: u64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(invalid(format!("Fischer weight needs p > 1, got {p}")));
    }
    if n < 1 {
        return Err(invalid("weight index must be at least 1"));
    }
    let r = (p - 1.0) / p;
    if n == 1 {
        return Ok(1.0 - (2f64.powf(r) - 1.0).powf(p - 1.0));
    }
    let x = 1.0 / n as f64;
    let upper = (r * x.ln_1p()).exp_m1();
    // U - W is the second difference of n^r; U^(p-1) - W^(p-1) = W^(p-1) expm1((p-1) ln(U/W))
    let diff = power_second_difference(r, x);
    Ok(upper.powf(p - 1.0) * ((p - 1.0) * (diff / upper).ln_1p()).exp_m1())
}

/// `C(4m, 2m) / ((4m - 1) 2^(4m-1))`, the coefficient of `n^(-2m)` in the
/// expansion of the Keller weight.
pub fn keller_series_coefficient(m: u32) -> Result<BigRational> {
    if m < 1 {
        return Err(invalid("series coefficient index must be at least 1"));
    }
    let top = 4 * m as u64;
    let k = 2 * m as u64;
    let mut binom = BigUint::one();
    for i in 0..k {
        binom = binom * BigUint::from(top - i) / BigUint::from(i + 1);
    }
    let den = BigUint::from(4 * m as u64 - 1) << (4 * m as u64 - 1);
    Ok(BigRational::new(binom.into(), den.into()))
}

/// `sum_{m <= order} c_m n^(-2m)` in binary64.
pub fn keller_series_partial(n: u64, order: u32) -> Result<f64> {
    let inv2 = 1.0 / (n as f64 * n as f64);
    let mut acc = 0.0;
    let mut pw = 1.0;
    for m in 1..=order {
        pw *= inv2;
        acc += keller_series_coefficient(m)?.to_f64().unwrap_or(0.0) * pw;
    }
    Ok(acc)
}

/// Bound on `w_n - sum_{m <= order} c_m n^(-2m)`: the coefficients decrease,
/// so the remainder is at most `c_{order+1} n^(-2(order+1)) / (1 - n^-2)`.
pub fn keller_series_remainder_bound(n: u64, order: u32) -> Result<f64> {
    if n < 2 {
        return Err(invalid("remainder bound needs n >= 2"));
    }
    let inv2 = 1.0 / (n as f64 * n as f64);
    let c = keller_series_coefficient(order + 1)?.to_f64().unwrap_or(f64::INFINITY);
    Ok(c * inv2.powi(order as i32 + 1) / (1.0 - inv2))
}

/// Partial sum through `order` of the expansion of `w_n(l, n^beta)` in
/// powers of `1/n`:
/// `-sum_k binom(beta, k) n^-k ((-1)^k / l_n + 1 / l_{n+1})`.
pub fn series_expansion(lambda: &WeightSeq, beta: f64, n: usize, order: u32) -> Result<f64> {
    if n < 2 {
        return Err(invalid("series expansion needs n >= 2"));
    }
    if order < 1 {
        return Err(invalid("series order must be at least 1"));
    }
    lambda.check_domain(n + 1)?;
    let x = 1.0 / n as f64;
    let sym = 1.0 / lambda.value(n) + 1.0 / lambda.value(n + 1);
    let anti = lambda.reciprocal_difference(n);
    let mut binom = 1.0;
    let mut xk = 1.0;
    let mut acc = 0.0;
    for k in 1..=order {
        binom *= (beta - (k - 1) as f64) / k as f64;
        xk *= x;
        let lam = if k % 2 == 0 { sym } else { -anti };
        acc -= binom * xk * lam;
    }
    Ok(acc)
}

/// The weight families, each with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    Keller,
    GWeight(WeightSeq),
    LambdaG { lambda: WeightSeq, g: WeightSeq },
    Power { alpha: f64, beta: f64 },
    Fischer { p: f64 },
    Copson { c: f64 },
}

/// One weight value next to its family's classical comparator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightValue {
    pub n: usize,
    pub value: f64,
    pub classical_bound: f64,
    pub margin: f64,
    /// False when the parameters lie outside the range where the weight is
    /// known to improve on the comparator; such margins are exploratory.
    pub proven: bool,
}

impl WeightFamily {
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightFamily::Fischer { p } if !(*p > 1.0 && p.is_finite()) => {
                Err(invalid(format!("Fischer family needs p > 1, got {p}")))
            }
            WeightFamily::Copson { c } if !(*c > 1.0 && *c <= 2.0) => {
                Err(invalid(format!("Copson family needs 1 < c <= 2, got {c}")))
            }
            WeightFamily::Power { alpha, beta } if !(alpha.is_finite() && beta.is_finite()) => {
                Err(invalid("power family parameters must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Short name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            WeightFamily::Keller => "keller",
            WeightFamily::GWeight(_) => "g",
            WeightFamily::LambdaG { .. } => "lambda-g",
            WeightFamily::Power { .. } => "power",
            WeightFamily::Fischer { .. } => "fischer",
            WeightFamily::Copson { .. } => "copson",
        }
    }

    /// Where the comparator comes from, for self-describing reports.
    pub fn reference(&self) -> &'static str {
        match self {
            WeightFamily::Keller => "improved Hardy weight > 1/(4n^2)",
            WeightFamily::GWeight(_) | WeightFamily::LambdaG { .. } => {
                "w_n(lambda, n^beta) > beta(1-beta)/(2n^2) (1/lambda_n + 1/lambda_{n+1})"
            }
            WeightFamily::Power { .. } => "power weight > (alpha-1)^2/4 n^(alpha-2)",
            WeightFamily::Fischer { .. } => "Fischer weight > ((p-1)/p)^p n^-p",
            WeightFamily::Copson { .. } => "Copson weight V_n > (c-1)^2/4 n / S_n^c",
        }
    }

    pub fn value(&self, n: usize) -> Result<f64> {
        if n < 1 {
            return Err(invalid("weight index must be at least 1"));
        }
        match self {
            WeightFamily::Keller => Ok(keller_weight(n as u64)),
            WeightFamily::GWeight(g) => g_weight(g, n),
            WeightFamily::LambdaG { lambda, g } => lambda_g_weight(lambda, g, n),
            WeightFamily::Power { alpha, beta } => Ok(power_weight(*alpha, *beta, n as u64)),
            WeightFamily::Fischer { p } => fischer_weight(*p, n as u64),
            WeightFamily::Copson { c } => copson::copson_weight(*c, n as u64),
        }
    }
}

fn power_lambda_g_comparator(beta: f64, lambda: &WeightSeq, n: usize) -> f64 {
    let x = n as f64;
    beta * (1.0 - beta) / (2.0 * x * x) * (1.0 / lambda.value(n) + 1.0 / lambda.value(n + 1))
}

/// Weight value, classical comparator and their difference at `n`.
pub fn improvement_margin(family: &WeightFamily, n: usize) -> Result<WeightValue> {
    family.validate()?;
    let value = family.value(n)?;
    let x = n as f64;
    let (classical_bound, proven) = match family {
        WeightFamily::Keller => (0.25 / (x * x), true),
        WeightFamily::GWeight(g) => match g.power_exponent() {
            Some(b) if b > 0.0 && b < 1.0 => {
                (power_lambda_g_comparator(b, &WeightSeq::one(), n), true)
            }
            _ => (0.25 / (x * x), false),
        },
        WeightFamily::LambdaG { lambda, g } => match g.power_exponent() {
            Some(b) if b > 0.0 && b < 1.0 => (
                power_lambda_g_comparator(b, lambda, n),
                lambda.is_non_decreasing_on(n + 1),
            ),
            _ => (power_lambda_g_comparator(0.5, lambda, n), false),
        },
        WeightFamily::Power { alpha, beta } => {
            let in_alpha = *alpha == 0.0 || (*alpha >= 1.0 / 3.0 && *alpha < 1.0);
            let optimal_beta = ((1.0 - alpha) / 2.0 - beta).abs() <= 1e-12;
            (
                (alpha - 1.0).powi(2) / 4.0 * x.powf(alpha - 2.0),
                in_alpha && optimal_beta,
            )
        }
        WeightFamily::Fischer { p } => (((p - 1.0) / p).powf(*p) * x.powf(-p), true),
        WeightFamily::Copson { c } => {
            let s = 0.5 * x * (x + 1.0);
            (
                (c - 1.0).powi(2) / 4.0 * x / s.powf(*c),
                (c - 1.5).abs() <= 1e-12,
            )
        }
    };
    let margin = match family {
        WeightFamily::Keller => keller_excess(n as u64),
        _ => value - classical_bound,
    };
    Ok(WeightValue {
        n,
        value,
        classical_bound,
        margin,
        proven,
    })
}
