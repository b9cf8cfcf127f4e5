//! Logarithmic cutoff sequences and the remainder sums that certify
//! optimality of the improved weights.
//!
//! A cutoff `gamma^N` is 1 below `N`, interpolates logarithmically on
//! `[N, N^2]` and vanishes beyond. Plugging `A_n = gamma^N_n g_n` into the
//! remainder identity leaves a weighted sum of squared differences of
//! `gamma^N`, which must tend to 0 as `N` grows.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::seq::{Rule, WeightSeq};
use crate::sum::chunked_sum;

#[derive(Debug, Clone, PartialEq)]
pub enum CutoffKind {
    /// Slope `sqrt(lambda_n)` in the window.
    Hardy(WeightSeq),
    /// Slope `(2n/(n+1))^(1/4)` in the window.
    Copson,
}

/// `gamma^N`, evaluated on demand; nothing is stored per index.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSequence {
    n_cut: u64,
    kind: CutoffKind,
    log_n: f64,
}

/// `(2n/(n+1))^(1/4)`.
fn copson_slope(n: u64) -> f64 {
    let x = n as f64;
    (2.0 * x / (x + 1.0)).powf(0.25)
}

impl CutoffSequence {
    pub fn n_cut(&self) -> u64 {
        self.n_cut
    }

    pub fn kind(&self) -> &CutoffKind {
        &self.kind
    }

    /// Last index of the window, `N^2`.
    pub fn window_end(&self) -> u64 {
        self.n_cut * self.n_cut
    }

    fn slope(&self, n: u64) -> f64 {
        match &self.kind {
            CutoffKind::Hardy(lambda) => lambda.value(n as usize).sqrt(),
            CutoffKind::Copson => copson_slope(n),
        }
    }

    /// The window formula `(2 log N - slope_n log n) / log N` without clamping.
    pub fn raw(&self, n: u64) -> f64 {
        (2.0 * self.log_n - self.slope(n) * (n as f64).ln()) / self.log_n
    }

    /// `gamma^N_n`, clamped to `[0, 1]` inside the window.
    pub fn value(&self, n: u64) -> f64 {
        if n < self.n_cut {
            1.0
        } else if n > self.window_end() {
            0.0
        } else {
            self.raw(n).clamp(0.0, 1.0)
        }
    }

    /// `slope_n log n - slope_{n-1} log(n-1)` for `n >= 3`, without
    /// cancellation.
    fn log_step(&self, n: u64) -> f64 {
        let prev = (n - 1) as f64;
        let step = (1.0 / prev).ln_1p();
        let (s_n, slope_gain) = match &self.kind {
            CutoffKind::Hardy(lambda) => {
                let s_n = lambda.value(n as usize).sqrt();
                (s_n, s_n - lambda.value(n as usize - 1).sqrt())
            }
            CutoffKind::Copson => {
                let s_n = copson_slope(n);
                let x = n as f64;
                // slope_{n-1}/slope_n = ((n-1)(n+1)/n^2)^(1/4)
                (s_n, -s_n * (0.25 * (-1.0 / (x * x)).ln_1p()).exp_m1())
            }
        };
        s_n * step + slope_gain * prev.ln()
    }

    /// The unclamped window difference `raw(n) - raw(n-1)`.
    pub fn raw_difference(&self, n: u64) -> f64 {
        -self.log_step(n) / self.log_n
    }

    /// `gamma^N_n - gamma^N_{n-1}`.
    pub fn difference(&self, n: u64) -> f64 {
        let inside = n > self.n_cut && n <= self.window_end();
        if inside {
            let (a, b) = (self.raw(n - 1), self.raw(n));
            if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
                return self.raw_difference(n);
            }
        }
        self.value(n) - self.value(n - 1)
    }

    /// `gamma^N_1, ..., gamma^N_{N^2+1}`.
    pub fn values(&self) -> Vec<f64> {
        (1..=self.window_end() + 1).map(|n| self.value(n)).collect()
    }
}

fn check_n(n_cut: u64) -> Result<f64> {
    if n_cut < 2 {
        return Err(invalid(format!("cutoff parameter N must be at least 2, got {n_cut}")));
    }
    if n_cut > u32::MAX as u64 {
        return Err(invalid("cutoff parameter N is too large"));
    }
    Ok((n_cut as f64).ln())
}

/// The Hardy cutoff. `lambda` must be non-decreasing with `lambda_n >= 1`.
pub fn hardy_cutoff(n_cut: u64, lambda: &WeightSeq) -> Result<CutoffSequence> {
    let log_n = check_n(n_cut)?;
    let last = (n_cut * n_cut + 1) as usize;
    lambda.check_domain(last)?;
    if !lambda.is_non_decreasing_on(last) {
        return Err(Error::Hypothesis(format!("lambda = {lambda} is not non-decreasing")));
    }
    if lambda.min_on(last) < 1.0 {
        return Err(Error::Hypothesis(format!("lambda = {lambda} drops below 1")));
    }
    Ok(CutoffSequence {
        n_cut,
        kind: CutoffKind::Hardy(lambda.clone()),
        log_n,
    })
}

/// The Copson cutoff.
pub fn copson_cutoff(n_cut: u64) -> Result<CutoffSequence> {
    let log_n = check_n(n_cut)?;
    Ok(CutoffSequence {
        n_cut,
        kind: CutoffKind::Copson,
        log_n,
    })
}

/// `1/log N + N / (2 (N^2 - 1) (log N)^2)`.
pub fn paper_bound(n_cut: u64) -> f64 {
    let x = n_cut as f64;
    let l = x.ln();
    1.0 / l + x / (2.0 * (x * x - 1.0) * l * l)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeKind {
    Hardy { lambda: WeightSeq, beta: f64 },
    Copson,
}

impl ProbeKind {
    /// Whether the decay bound is claimed for this configuration: the Hardy
    /// probe with `lambda = 1`, `beta = 1/2`, and the Copson probe.
    pub fn bound_claimed(&self) -> bool {
        match self {
            ProbeKind::Hardy { lambda, beta } => {
                matches!(lambda.rule(), Rule::Const(c) if *c == 1.0) && *beta == 0.5
            }
            ProbeKind::Copson => true,
        }
    }

    pub fn reference(&self) -> &'static str {
        match self {
            ProbeKind::Hardy { .. } => {
                "optimality of w_n(lambda,beta): remainder <= 1/log N + N/(2(N^2-1)(log N)^2)"
            }
            ProbeKind::Copson => {
                "optimality of the Copson weight V_n: remainder <= 1/log N + N/(2(N^2-1)(log N)^2)"
            }
        }
    }
}

/// One evaluated cutoff.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityProbe {
    #[serde(rename = "N")]
    pub n_cut: u64,
    /// The full remainder over `n in [2, N^2 + 1]` with the clamped cutoff.
    pub remainder: f64,
    pub paper_bound: f64,
    pub ratio: f64,
    /// The displayed window sum over `n in [N+1, N^2]` with the unclamped
    /// window formula; it omits the step at `n = N` and the clamping.
    pub window_sum: f64,
    pub bound_claimed: bool,
}

impl OptimalityProbe {
    pub fn within_bound(&self) -> bool {
        self.remainder <= self.paper_bound
    }

    /// The claimed bound is violated.
    pub fn failed(&self) -> bool {
        self.bound_claimed && !self.within_bound()
    }
}

fn square_weight(kind: &ProbeKind, n: u64) -> f64 {
    let x = n as f64;
    match kind {
        ProbeKind::Hardy { lambda, beta } => (x * (x - 1.0)).powf(*beta) / lambda.value(n as usize),
        ProbeKind::Copson => (x * (x - 1.0)).sqrt() * ((x + 1.0) / (2.0 * x)).sqrt(),
    }
}

fn probe(kind: &ProbeKind, n_cut: u64) -> Result<OptimalityProbe> {
    let cutoff = match kind {
        ProbeKind::Hardy { lambda, .. } => hardy_cutoff(n_cut, lambda)?,
        ProbeKind::Copson => copson_cutoff(n_cut)?,
    };
    let end = cutoff.window_end();
    // differences vanish outside [N, N^2 + 1]
    let remainder = chunked_sum(n_cut.max(2), end + 1, |n| {
        let d = cutoff.difference(n);
        square_weight(kind, n) * d * d
    });
    let window_sum = chunked_sum(n_cut + 1, end, |n| {
        let d = cutoff.raw_difference(n);
        square_weight(kind, n) * d * d
    });
    let bound = paper_bound(n_cut);
    Ok(OptimalityProbe {
        n_cut,
        remainder,
        paper_bound: bound,
        ratio: remainder / bound,
        window_sum,
        bound_claimed: kind.bound_claimed(),
    })
}

/// Remainder sums for each `N` in `n_list`. The Hardy probe needs
/// `beta in (0, 1/2]`.
pub fn remainder_sweep(kind: &ProbeKind, n_list: &[u64]) -> Result<Vec<OptimalityProbe>> {
    if let ProbeKind::Hardy { beta, .. } = kind {
        if !(*beta > 0.0 && *beta <= 0.5) {
            return Err(invalid(format!("optimality probe needs beta in (0, 1/2], got {beta}")));
        }
    }
    n_list.iter().map(|&n| probe(kind, n)).collect()
}

/// `sum_{n>=2} g_n g_{n-1} / lambda_n |gamma^N_n - gamma^N_{n-1}|^2` for the
/// Hardy cutoff.
pub fn limcond_sum(lambda: &WeightSeq, g: &WeightSeq, n_cut: u64) -> Result<f64> {
    let cutoff = hardy_cutoff(n_cut, lambda)?;
    let end = cutoff.window_end();
    g.check_domain(end as usize + 1)?;
    Ok(chunked_sum(n_cut.max(2), end + 1, |n| {
        let d = cutoff.difference(n);
        let k = n as usize;
        g.value(k) * g.value(k - 1) / lambda.value(k) * d * d
    }))
}
