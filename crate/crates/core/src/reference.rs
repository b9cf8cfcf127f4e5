//! Extended-precision reference arithmetic.
//!
//! Values are big-integer fixed point with [`FRAC_BITS`] fractional bits
//! (about 96 significant decimal digits near 1). Only the operations the
//! reference weight evaluations need are provided: field arithmetic and
//! integer roots, which cover every rational power. Each root truncates by
//! at most one unit in the last place.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const FRAC_BITS: u64 = 320;

/// A fixed-point real with [`FRAC_BITS`] fractional bits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RefReal(BigInt);

fn one_raw() -> BigInt {
    BigInt::one() << FRAC_BITS
}

impl RefReal {
    pub fn zero() -> Self {
        Self(BigInt::zero())
    }

    pub fn one() -> Self {
        Self(one_raw())
    }

    pub fn from_int(v: i128) -> Self {
        Self(BigInt::from(v) << FRAC_BITS)
    }

    /// `num / den`, truncated.
    pub fn ratio(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        Self((BigInt::from(num) << FRAC_BITS) / BigInt::from(den))
    }

    /// Exact conversion of a binary64 value; bits below 2^-320 are truncated.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite reference input");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let shift = exp + FRAC_BITS as i64;
        let m = BigInt::from(mantissa);
        let raw = if shift >= 0 {
            m << shift as u64
        } else {
            m >> (-shift) as u64
        };
        Self(if negative { -raw } else { raw })
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Self {
        self.root(2)
    }

    /// `self^(1/k)` for non-negative `self`.
    pub fn root(&self, k: u32) -> Self {
        assert!(!self.is_negative(), "root of a negative reference value");
        assert!(k >= 1);
        if k == 1 {
            return self.clone();
        }
        // (v / F)^(1/k) * F == (v * F^(k-1))^(1/k)
        let scaled = &self.0 << (FRAC_BITS * (k as u64 - 1));
        Self(scaled.nth_root(k))
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// `self^(num/den)` for positive `self`.
    pub fn pow_ratio(&self, num: i32, den: u32) -> Self {
        assert!(den >= 1);
        let base = if num < 0 { self.recip() } else { self.clone() };
        base.powi(num.unsigned_abs()).root(den)
    }

    /// Nearest-ish binary64 value (error below one ulp).
    pub fn to_f64(&self) -> f64 {
        let mag = self.0.magnitude();
        let bits = mag.bits();
        if bits == 0 {
            return 0.0;
        }
        let keep = 62u64;
        let (top, shift) = if bits > keep {
            ((mag >> (bits - keep)).to_u64().unwrap(), bits - keep)
        } else {
            (mag.to_u64().unwrap(), 0)
        };
        let v = top as f64 * 2f64.powi(shift as i32 - FRAC_BITS as i32);
        if self.0.sign() == Sign::Minus {
            -v
        } else {
            v
        }
    }

    /// `|approx - self| / |self|`, evaluated in reference precision.
    pub fn relative_error(&self, approx: f64) -> f64 {
        let diff = (RefReal::from_f64(approx) - self.clone()).abs();
        (diff / self.abs()).to_f64()
    }
}

impl Add for RefReal {
    type Output = RefReal;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for RefReal {
    type Output = RefReal;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for RefReal {
    type Output = RefReal;
    fn mul(self, rhs: Self) -> Self {
        Self((self.0 * rhs.0) >> FRAC_BITS)
    }
}

impl Div for RefReal {
    type Output = RefReal;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.0.is_zero(), "reference division by zero");
        Self((self.0 << FRAC_BITS) / rhs.0)
    }
}

impl Neg for RefReal {
    type Output = RefReal;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl PartialOrd<f64> for RefReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        other
            .is_finite()
            .then(|| self.cmp(&RefReal::from_f64(*other)))
    }
}

impl PartialEq<f64> for RefReal {
    fn eq(&self, other: &f64) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

/// `2 - sqrt(1 - 1/n) - sqrt(1 + 1/n)` in reference precision.
pub fn keller_weight(n: u64) -> RefReal {
    let n = n as i128;
    let two = RefReal::from_int(2);
    two - RefReal::ratio(n - 1, n).sqrt() - RefReal::ratio(n + 1, n).sqrt()
}

/// `S_n = n(n+1)/2` raised to `e_num/e_den`.
fn triangular_pow(n: i128, e_num: i32, e_den: u32) -> RefReal {
    RefReal::ratio(n * (n + 1), 2).pow_ratio(e_num, e_den)
}

/// The Copson weight `V_n` for rational `c = c_num / c_den`, evaluated
/// straight from its defining four-term expression.
pub fn copson_weight(c_num: i32, c_den: u32, n: u64) -> RefReal {
    // 2 - c = (2 c_den - c_num) / c_den
    let e_num = 2 * c_den as i32 - c_num;
    let n = n as i128;
    let a = triangular_pow(n, e_num, c_den) / RefReal::from_int(n);
    let b = triangular_pow(n + 1, e_num, c_den) / RefReal::from_int(n + 1);
    a.clone() + b.clone()
        - a * RefReal::ratio(n - 1, n).sqrt()
        - b * RefReal::ratio(n + 1, n).sqrt()
}
