//! Finitely supported sequences, positive weight sequences and weighted
//! partial sums.
//!
//! Indices start at 1. Index 0 is reserved for the `A_0 = 0` / `g_0 = 0`
//! convention: every sequence and every weight rule evaluates to zero there.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sum::{compensated, NeumaierSum};
use crate::weights::keller_weight;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A complex sequence that vanishes outside `offset..offset + len`.
///
/// Always stored normalized: leading zeros are folded into the offset and
/// trailing zeros are stripped, so structural equality is sequence equality.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSequence {
    offset: usize,
    values: Vec<Complex64>,
}

impl Default for FiniteSequence {
    fn default() -> Self {
        Self::zero()
    }
}

impl FiniteSequence {
    pub fn zero() -> Self {
        Self {
            offset: 1,
            values: Vec::new(),
        }
    }

    pub fn new(offset: usize, values: Vec<Complex64>) -> Result<Self> {
        if offset < 1 {
            return Err(Error::InvalidOffset(offset));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite { index: offset + i });
        }
        Ok(Self::normalized(offset, values))
    }

    pub fn from_real(offset: usize, values: &[f64]) -> Result<Self> {
        Self::new(offset, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Sequence starting at index 1.
    pub fn from_slice(values: &[Complex64]) -> Result<Self> {
        Self::new(1, values.to_vec())
    }

    /// The unit vector `e_i`.
    pub fn unit(i: usize) -> Result<Self> {
        Self::new(i, vec![Complex64::new(1.0, 0.0)])
    }

    /// Builds `f(n)` for `n` in `first..=last`.
    pub fn from_fn(first: usize, last: usize, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        if last < first {
            return Ok(Self::zero());
        }
        Self::new(first, (first..=last).map(f).collect())
    }

    fn normalized(mut offset: usize, mut values: Vec<Complex64>) -> Self {
        while values.last() == Some(&ZERO) {
            values.pop();
        }
        let lead = values.iter().take_while(|v| **v == ZERO).count();
        if lead > 0 {
            values.drain(..lead);
            offset += lead;
        }
        if values.is_empty() {
            offset = 1;
        }
        Self { offset, values }
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Last index carrying a nonzero value, or 0 for the zero sequence.
    pub fn support_end(&self) -> usize {
        if self.values.is_empty() {
            0
        } else {
            self.offset + self.values.len() - 1
        }
    }

    pub fn get(&self, n: usize) -> Complex64 {
        if n < self.offset {
            return ZERO;
        }
        self.values.get(n - self.offset).copied().unwrap_or(ZERO)
    }

    /// Iterates `(n, value)` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i, *v))
    }

    /// Dense values for indices `1..=support_end`.
    pub fn dense(&self) -> Vec<Complex64> {
        (1..=self.support_end()).map(|n| self.get(n)).collect()
    }

    pub fn scale(&self, t: Complex64) -> Self {
        Self::normalized(self.offset, self.values.iter().map(|v| v * t).collect())
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        let end = self.support_end().max(other.support_end());
        if end == 0 {
            return Self::zero();
        }
        let values = (1..=end)
            .map(|n| alpha * self.get(n) + beta * other.get(n))
            .collect();
        Self::normalized(1, values)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// `(sum |x_n|^p)^(1/p)`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        compensated(self.values.iter().map(|v| v.norm().powf(p))).powf(1.0 / p)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

/// An eventually constant sequence: an explicit prefix for `1..=end`
/// followed by a constant plateau.
///
/// Partial sums of a finitely supported sequence take this shape.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSums {
    prefix: Vec<Complex64>,
    plateau: Complex64,
}

impl PartialSums {
    pub fn new(prefix: Vec<Complex64>, plateau: Complex64) -> Self {
        let mut prefix = prefix;
        while prefix.last() == Some(&plateau) {
            prefix.pop();
        }
        Self { prefix, plateau }
    }

    /// A compactly supported sequence viewed as partial sums with zero plateau.
    pub fn compact(seq: &FiniteSequence) -> Self {
        Self::new(seq.dense(), ZERO)
    }

    pub fn plateau(&self) -> Complex64 {
        self.plateau
    }

    pub fn prefix(&self) -> &[Complex64] {
        &self.prefix
    }

    /// Last index of the explicit prefix; beyond it the plateau applies.
    pub fn end(&self) -> usize {
        self.prefix.len()
    }

    pub fn get(&self, n: usize) -> Complex64 {
        if n == 0 {
            ZERO
        } else if n <= self.prefix.len() {
            self.prefix[n - 1]
        } else {
            self.plateau
        }
    }

    /// The prefix as a finite sequence, valid only when the plateau is zero.
    pub fn to_compact(&self) -> Result<FiniteSequence> {
        if self.plateau != ZERO {
            return Err(Error::NonZeroPlateau);
        }
        FiniteSequence::new(1, self.prefix.clone())
    }
}

impl TryFrom<&PartialSums> for FiniteSequence {
    type Error = Error;

    fn try_from(value: &PartialSums) -> Result<Self> {
        value.to_compact()
    }
}

/// A strictly positive real sequence indexed from 1, with value 0 at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSeq {
    rule: Rule,
}

/// The closed-form rules a [`WeightSeq`] can follow.
#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    /// `c` for every `n`.
    Const(f64),
    /// `n^s`.
    Power(f64),
    /// `sqrt(n)`.
    Sqrt,
    /// `n`.
    Linear,
    /// `n(n+1)/2`.
    Triangular,
    /// `r^n`.
    Geometric(f64),
    /// The improved Hardy weight `2 - sqrt(1 - 1/n) - sqrt(1 + 1/n)`.
    Keller,
    /// Explicit values for `1..=values.len()`, then an optional generator
    /// evaluated at the absolute index.
    Table {
        values: Vec<f64>,
        tail: Option<Box<WeightSeq>>,
    },
}

/// Certified bracket `[lo, hi]` around an infinite sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn exact(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn shift(&self, by: f64) -> Self {
        Self {
            lo: self.lo + by,
            hi: self.hi + by,
        }
    }

    pub fn scale(&self, by: f64) -> Self {
        debug_assert!(by >= 0.0);
        Self {
            lo: self.lo * by,
            hi: self.hi * by,
        }
    }

    pub fn add(&self, other: &Bracket) -> Self {
        Self {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }
}

/// `int_a^inf x^s dx` for `s < -1`.
fn power_integral(a: f64, s: f64) -> f64 {
    a.powf(s + 1.0) / (-s - 1.0)
}

/// Bracket for `sum_{n>m} n^s`, `s < -1`, from convexity: the trapezoid rule
/// overestimates and the midpoint rule underestimates the integral.
pub(crate) fn power_tail(m: usize, s: f64) -> Bracket {
    let a = m as f64 + 1.0;
    Bracket {
        lo: power_integral(a, s) + 0.5 * a.powf(s),
        hi: power_integral(a - 0.5, s),
    }
}

impl WeightSeq {
    fn from_rule(rule: Rule) -> Result<Self> {
        match &rule {
            Rule::Const(c) if !(c.is_finite() && *c > 0.0) => {
                return Err(invalid(format!("constant weight must be positive, got {c}")))
            }
            Rule::Power(s) if !s.is_finite() => {
                return Err(invalid("power exponent must be finite"))
            }
            Rule::Geometric(r) if !(r.is_finite() && *r > 0.0) => {
                return Err(invalid(format!("geometric ratio must be positive, got {r}")))
            }
            Rule::Table { values, .. } => {
                if values.is_empty() {
                    return Err(invalid("weight table is empty"));
                }
                if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
                    return Err(invalid(format!(
                        "weight table entry {} is not strictly positive: {}",
                        i + 1,
                        values[i]
                    )));
                }
            }
            _ => {}
        }
        Ok(Self { rule })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::from_rule(Rule::Const(c))
    }

    pub fn one() -> Self {
        Self {
            rule: Rule::Const(1.0),
        }
    }

    pub fn power(s: f64) -> Result<Self> {
        Self::from_rule(Rule::Power(s))
    }

    pub fn sqrt() -> Self {
        Self { rule: Rule::Sqrt }
    }

    pub fn linear() -> Self {
        Self { rule: Rule::Linear }
    }

    pub fn triangular() -> Self {
        Self {
            rule: Rule::Triangular,
        }
    }

    pub fn geometric(r: f64) -> Result<Self> {
        Self::from_rule(Rule::Geometric(r))
    }

    pub fn keller() -> Self {
        Self { rule: Rule::Keller }
    }

    pub fn table(values: Vec<f64>, tail: Option<WeightSeq>) -> Result<Self> {
        Self::from_rule(Rule::Table {
            values,
            tail: tail.map(Box::new),
        })
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// Last index the sequence is defined at, `None` when unbounded.
    pub fn domain_end(&self) -> Option<usize> {
        match &self.rule {
            Rule::Table { values, tail: None } => Some(values.len()),
            Rule::Table {
                tail: Some(t), ..
            } => t.domain_end(),
            _ => None,
        }
    }

    /// Fails unless every index in `1..=n_max` can be evaluated.
    pub fn check_domain(&self, n_max: usize) -> Result<()> {
        match self.domain_end() {
            Some(end) if end < n_max => Err(Error::OutOfDomain { n: n_max, end }),
            _ => Ok(()),
        }
    }

    /// Value at `n`; zero at `n = 0`.
    ///
    /// Panics when `n` lies beyond a table without a tail rule; callers
    /// validate with [`WeightSeq::check_domain`] first.
    pub fn value(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let x = n as f64;
        match &self.rule {
            Rule::Const(c) => *c,
            Rule::Power(s) => x.powf(*s),
            Rule::Sqrt => x.sqrt(),
            Rule::Linear => x,
            Rule::Triangular => 0.5 * x * (x + 1.0),
            Rule::Geometric(r) => r.powf(x),
            Rule::Keller => keller_weight(n as u64),
            Rule::Table { values, tail } => match values.get(n - 1) {
                Some(v) => *v,
                None => match tail {
                    Some(t) => t.value(n),
                    None => panic!(
                        "weight table evaluated at {n} beyond its {} entries",
                        values.len()
                    ),
                },
            },
        }
    }

    /// Exponent `s` when the sequence is `c * n^s` for some `c > 0`.
    pub fn power_exponent(&self) -> Option<f64> {
        match &self.rule {
            Rule::Const(_) => Some(0.0),
            Rule::Power(s) => Some(*s),
            Rule::Sqrt => Some(0.5),
            Rule::Linear => Some(1.0),
            _ => None,
        }
    }

    fn scale_factor(&self) -> f64 {
        match &self.rule {
            Rule::Const(c) => *c,
            _ => 1.0,
        }
    }

    /// `2 - g_{n-1}/g_n - g_{n+1}/g_n`, with `g_0 = 0`.
    ///
    /// Power-law rules use a cancellation-free form: writing `x = 1/n`,
    /// `sigma = s ln(1 - x^2)` and `delta = s atanh(x)`, the value equals
    /// `-2 (exp(sigma/2) 2 sinh^2(delta/2) + expm1(sigma/2))`.
    pub fn second_difference_ratio(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        if n == 1 {
            return 2.0 - self.value(2) / self.value(1);
        }
        match &self.rule {
            Rule::Const(_) | Rule::Linear => 0.0,
            Rule::Triangular => {
                let x = n as f64;
                -2.0 / (x * (x + 1.0))
            }
            Rule::Geometric(r) => -(1.0 - r) * (1.0 - r) / r,
            _ => match self.power_exponent() {
                Some(s) => power_second_difference(s, 1.0 / n as f64),
                None => {
                    let g = self.value(n);
                    2.0 - self.value(n - 1) / g - self.value(n + 1) / g
                }
            },
        }
    }

    /// `(g_{n+1} - g_{n-1}) / g_n`, with `g_0 = 0`.
    pub fn spread_ratio(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        match (self.power_exponent(), n) {
            (Some(s), n) if n >= 2 => {
                let x = 1.0 / n as f64;
                (s * x.ln_1p()).exp_m1() - (s * (-x).ln_1p()).exp_m1()
            }
            _ => (self.value(n + 1) - self.value(n - 1)) / self.value(n),
        }
    }

    /// `1/l_n - 1/l_{n+1}` without cancellation for power-law rules.
    pub fn reciprocal_difference(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        match self.power_exponent() {
            Some(0.0) => 0.0,
            Some(s) => {
                let x = n as f64;
                -x.powf(-s) * (-s * (1.0 / x).ln_1p()).exp_m1() / self.scale_factor()
            }
            None => 1.0 / self.value(n) - 1.0 / self.value(n + 1),
        }
    }

    /// `Q_n = q_1 + ... + q_n`.
    pub fn cumulative(&self, n: usize) -> f64 {
        let x = n as f64;
        match &self.rule {
            Rule::Const(c) => c * x,
            Rule::Linear => 0.5 * x * (x + 1.0),
            Rule::Triangular => x * (x + 1.0) * (x + 2.0) / 6.0,
            Rule::Geometric(r) if *r != 1.0 => r * (x * r.ln()).exp_m1() / (r - 1.0),
            Rule::Geometric(_) => x,
            _ => compensated((1..=n).map(|k| self.value(k))),
        }
    }

    /// All cumulative sums `Q_1..=Q_n`.
    pub fn cumulative_prefix(&self, n: usize) -> Vec<f64> {
        let mut acc = NeumaierSum::new();
        (1..=n)
            .map(|k| {
                acc += self.value(k);
                acc.value()
            })
            .collect()
    }

    /// Whether `value` is non-decreasing on `1..=n_max`.
    pub fn is_non_decreasing_on(&self, n_max: usize) -> bool {
        match &self.rule {
            Rule::Const(_) | Rule::Sqrt | Rule::Linear | Rule::Triangular => true,
            Rule::Power(s) => *s >= 0.0,
            Rule::Geometric(r) => *r >= 1.0,
            Rule::Keller => n_max <= 1,
            Rule::Table { .. } => (2..=n_max).all(|n| self.value(n) >= self.value(n - 1)),
        }
    }

    /// Smallest value on `1..=n_max`.
    pub fn min_on(&self, n_max: usize) -> f64 {
        match &self.rule {
            Rule::Const(c) => *c,
            Rule::Sqrt | Rule::Linear | Rule::Triangular => 1.0,
            Rule::Power(s) if *s >= 0.0 => 1.0,
            Rule::Geometric(r) if *r >= 1.0 => *r,
            _ => (1..=n_max.max(1))
                .map(|n| self.value(n))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Certified bracket for `sum_{n>m} value(n)`.
    pub fn tail_sum(&self, m: usize) -> Result<Bracket> {
        let diverges = |what: &str| Err(Error::TailDivergent(format!("sum of {what} weights")));
        match &self.rule {
            Rule::Const(_) => diverges("constant"),
            Rule::Sqrt => diverges("sqrt(n)"),
            Rule::Linear => diverges("linear"),
            Rule::Triangular => diverges("triangular"),
            Rule::Power(s) if *s >= -1.0 => diverges(&format!("n^{s}")),
            Rule::Power(s) => Ok(power_tail(m, *s)),
            Rule::Geometric(r) if *r >= 1.0 => diverges(&format!("{r}^n")),
            Rule::Geometric(r) => Ok(Bracket::exact(
                r.powf(m as f64 + 1.0) / (1.0 - r),
            )),
            Rule::Keller => {
                if m == 0 {
                    return Ok(self.tail_sum(1)?.shift(keller_weight(1)));
                }
                // 1/(4n^2) < w_n <= 1/(4n^2) + (5/64) n^-4 / (1 - n^-2) for n >= 2
                let lead = power_tail(m, -2.0).scale(0.25);
                let excess = power_tail(m, -4.0).hi * (5.0 / 48.0);
                Ok(Bracket {
                    lo: lead.lo,
                    hi: lead.hi + excess,
                })
            }
            Rule::Table { values, tail } => {
                let explicit = compensated(values.iter().skip(m).copied());
                match tail {
                    Some(t) => Ok(t.tail_sum(m.max(values.len()))?.shift(explicit)),
                    None => Err(Error::TailNotComputable(
                        "weight table has no tail rule".into(),
                    )),
                }
            }
        }
    }

    /// `(K, k)` with `Q_n <= K n^k` for every `n >= 1`.
    pub fn cumulative_envelope(&self) -> Option<(f64, f64)> {
        match &self.rule {
            Rule::Const(c) => Some((*c, 1.0)),
            Rule::Linear => Some((1.0, 2.0)),
            Rule::Triangular => Some((1.0, 3.0)),
            Rule::Sqrt => Some((1.0, 1.5)),
            Rule::Power(s) if *s >= 0.0 => Some((1.0, s + 1.0)),
            Rule::Power(s) if *s > -1.0 => Some((1.0 / (s + 1.0), s + 1.0)),
            Rule::Power(s) if *s == -1.0 => Some((2.0, 0.5)),
            Rule::Power(s) => Some((1.0 + 1.0 / (-s - 1.0), 0.0)),
            Rule::Geometric(r) if *r < 1.0 => Some((r / (1.0 - r), 0.0)),
            Rule::Keller => Some((1.0, 0.0)),
            _ => None,
        }
    }

    /// `(C, s)` with `value(n) <= C n^s` for every `n >= 1`.
    pub fn power_envelope(&self) -> Option<(f64, f64)> {
        match &self.rule {
            Rule::Const(c) => Some((*c, 0.0)),
            Rule::Power(s) => Some((1.0, *s)),
            Rule::Sqrt => Some((1.0, 0.5)),
            Rule::Linear => Some((1.0, 1.0)),
            Rule::Triangular => Some((1.0, 2.0)),
            Rule::Keller => Some((0.6, -2.0)),
            _ => None,
        }
    }
}

impl fmt::Display for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::Const(c) => write!(f, "const:{c}"),
            Rule::Power(s) => write!(f, "power:{s}"),
            Rule::Sqrt => write!(f, "sqrt"),
            Rule::Linear => write!(f, "linear"),
            Rule::Triangular => write!(f, "triangular"),
            Rule::Geometric(r) => write!(f, "geometric:{r}"),
            Rule::Keller => write!(f, "keller"),
            Rule::Table { values, tail } => {
                write!(f, "table[{}]", values.len())?;
                if let Some(t) = tail {
                    write!(f, "+{t}")?;
                }
                Ok(())
            }
        }
    }
}

/// `2 - (1-x)^s - (1+x)^s` for `0 < x < 1`, free of cancellation.
pub(crate) fn power_second_difference(s: f64, x: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let sigma = s * (-x * x).ln_1p();
    let half_delta = 0.5 * s * x.atanh();
    let sh = half_delta.sinh();
    -2.0 * ((0.5 * sigma).exp() * 2.0 * sh * sh + (0.5 * sigma).exp_m1())
}

/// `A_n = q_1 a_1 + ... + q_n a_n`, as a prefix over the support of `a`
/// plus the constant plateau beyond it.
pub fn partial_sums(a: &FiniteSequence, q: &WeightSeq) -> Result<PartialSums> {
    let end = a.support_end();
    q.check_domain(end)?;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let prefix: Vec<Complex64> = (1..=end)
        .map(|n| {
            let t = a.get(n) * q.value(n);
            re += t.re;
            im += t.im;
            Complex64::new(re.value(), im.value())
        })
        .collect();
    let plateau = prefix.last().copied().unwrap_or(ZERO);
    Ok(PartialSums::new(prefix, plateau))
}

/// Inverse of [`partial_sums`]: `a_n = (A_n - A_{n-1}) / q_n`.
pub fn differences(big_a: &PartialSums, q: &WeightSeq) -> Result<FiniteSequence> {
    let last = big_a.end() + 1;
    q.check_domain(last)?;
    let values = (1..=last)
        .map(|n| (big_a.get(n) - big_a.get(n - 1)) / q.value(n))
        .collect();
    FiniteSequence::new(1, values)
}

/// `Q_n`.
pub fn cumulative_weights(q: &WeightSeq, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(invalid("cumulative weight index must be at least 1"));
    }
    q.check_domain(n)?;
    Ok(q.cumulative(n))
}
