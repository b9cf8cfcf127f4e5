//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use discrete_hardy::FiniteSequence;

/// Decimal digits carried by the fixed-point oracles.
const DIGITS: u32 = 90;

fn unit() -> BigUint {
    BigUint::from(10u32).pow(DIGITS)
}

/// `floor(sqrt(num/den) 10^DIGITS)`.
fn sqrt_ratio(num: u128, den: u128) -> BigInt {
    let d = unit();
    BigInt::from((BigUint::from(num) * &d * &d / BigUint::from(den)).sqrt())
}

fn to_f64(v: &BigInt) -> f64 {
    // keep 30 significant digits before leaving integer arithmetic
    let digits = v.magnitude().to_string().len() as i32;
    let drop = (digits - 30).max(0);
    let head = v / BigInt::from(10u32).pow(drop as u32);
    head.to_f64().unwrap() * 10f64.powi(drop - DIGITS as i32)
}

/// `2 - sqrt(1 - 1/n) - sqrt(1 + 1/n)` with about 90 digits after the point.
pub fn keller_oracle(n: u64) -> f64 {
    let n = n as u128;
    let two = BigInt::from(2u32) * BigInt::from(unit());
    to_f64(&(two - sqrt_ratio(n - 1, n) - sqrt_ratio(n + 1, n)))
}

/// `A + B - A sqrt(1 - 1/n) - B sqrt(1 + 1/n)` with `A = S_n^(2-c)/n`,
/// `B = S_{n+1}^(2-c)/(n+1)`, for `c = 3/2` (`half = true`) or `c = 2`.
pub fn copson_oracle(half: bool, n: u64) -> f64 {
    let n = n as u128;
    let d = BigInt::from(unit());
    let coef = |k: u128| -> BigInt {
        if half {
            let s = k * (k + 1) / 2;
            sqrt_ratio(s, 1) / BigInt::from(k)
        } else {
            &d / BigInt::from(k)
        }
    };
    let a = coef(n);
    let b = coef(n + 1);
    let v = &a + &b - &a * sqrt_ratio(n - 1, n) / &d - &b * sqrt_ratio(n + 1, n) / &d;
    to_f64(&v)
}

/// `binom(1/2, k)` as an exact rational.
pub fn half_binomial(k: u32) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut acc = BigRational::one();
    for j in 0..k {
        acc = acc * (&half - BigRational::from_integer(BigInt::from(j))) / BigRational::from_integer(BigInt::from(j + 1));
    }
    acc
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex entries with `|re|, |im| <= 1` on `1..=len`.
pub fn random_sequence(rng: &mut ChaCha8Rng, max_len: usize) -> FiniteSequence {
    let len = rng.gen_range(1..=max_len);
    let values = (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    FiniteSequence::new(1, values).unwrap()
}

/// Sequences starting at a random offset, for the space layer.
pub fn random_offset_sequence(rng: &mut ChaCha8Rng, max_len: usize) -> FiniteSequence {
    let offset = rng.gen_range(1..=4);
    let len = rng.gen_range(1..=max_len);
    let values = (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    FiniteSequence::new(offset, values).unwrap()
}
