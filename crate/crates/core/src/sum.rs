//! Compensated summation.
//!
//! The remainder and tail sums in this crate add terms spanning many orders
//! of magnitude, so every long accumulation goes through [`NeumaierSum`].

use std::ops::{Add, AddAssign};

use rayon::prelude::*;

/// Kahan-Babuska-Neumaier running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        NeumaierSum::add(self, rhs);
    }
}

impl Add for NeumaierSum {
    type Output = NeumaierSum;

    fn add(mut self, rhs: Self) -> Self::Output {
        NeumaierSum::add(&mut self, rhs.sum);
        NeumaierSum::add(&mut self, rhs.comp);
        self
    }
}

impl std::iter::Sum<f64> for NeumaierSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc += v;
        }
        acc
    }
}

/// Compensated sum of an iterator of terms.
pub fn compensated<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    terms.into_iter().sum::<NeumaierSum>().value()
}

/// Fixed chunk length used by [`chunked_sum`].
pub const CHUNK: u64 = 1 << 15;

/// Sums `term(n)` for `n` in `lo..=hi` in parallel.
///
/// Chunk boundaries are fixed and the per-chunk partial sums are reduced
/// sequentially in index order, so the result does not depend on the number
/// of worker threads.
pub fn chunked_sum<F>(lo: u64, hi: u64, term: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    if hi < lo {
        return 0.0;
    }
    let chunks = (hi - lo) / CHUNK + 1;
    let partials: Vec<NeumaierSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = lo + c * CHUNK;
            let end = (start + CHUNK - 1).min(hi);
            (start..=end).map(&term).sum::<NeumaierSum>()
        })
        .collect();
    partials
        .into_iter()
        .fold(NeumaierSum::new(), |acc, p| acc + p)
        .value()
}
