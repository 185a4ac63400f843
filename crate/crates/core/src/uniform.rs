//! k-uniform strategies: enumeration, ranking and the sample-size selectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{ConvexStrategySpace, MixedStrategy};
use crate::math::{ceil_snapped, exp, ln_gamma, sqrt};

/// A k-uniform strategy in multiset form: `n` counts summing to `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountVector {
    counts: Vec<u64>,
    k: u64,
}

impl CountVector {
    /// Builds a count vector; `k` is the sum of the counts.
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        let k = counts.iter().sum();
        Ok(CountVector { counts, k })
    }

    /// The counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Their sum.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    /// Always false.
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Weights `counts / k`.
    pub fn weights(&self) -> Result<Vec<f64>> {
        if self.k == 0 {
            return Err(Error::ZeroUniform);
        }
        let k = self.k as f64;
        Ok(self.counts.iter().map(|&c| c as f64 / k).collect())
    }

    /// The mixed strategy `counts / k`.
    pub fn to_strategy(&self) -> Result<MixedStrategy> {
        MixedStrategy::normalized(self.weights()?)
    }

    /// The point `Σ_j (counts_j / k)·v_j` of a vertex space.
    pub fn to_point(&self, space: &ConvexStrategySpace) -> Result<Vec<f64>> {
        if space.vertex_count() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: space.vertex_count(),
                found: self.len(),
            });
        }
        Ok(space.point(&self.weights()?))
    }
}

/// Number of compositions of `k` into `n` nonnegative parts, `C(n+k−1, k)`, or `None` on
/// overflow of `u64`.
pub fn composition_count(n: usize, k: u64) -> Option<u64> {
    if n == 0 {
        return Some(0);
    }
    // C(k + r, r) with r = n − 1, built incrementally so every partial value is a binomial.
    let r = (n - 1) as u64;
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = acc.checked_mul((k + i) as u128)? / i as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(n+k−1, k)` in floating point, usable far beyond `u64`.
pub fn composition_count_f64(n: usize, k: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if let Some(c) = composition_count(n, k) {
        if c < (1u64 << 53) {
            return c as f64;
        }
    }
    let (n, k) = (n as f64, k as f64);
    exp(ln_gamma(n + k) - ln_gamma(k + 1.0) - ln_gamma(n))
}

/// Iterator over the compositions of `k` into `n` parts, in lexicographically decreasing order,
/// restricted to a contiguous index range.
#[derive(Debug, Clone)]
pub struct KUniform {
    current: Vec<u64>,
    remaining: u64,
}

impl Iterator for KUniform {
    type Item = CountVector;

    fn next(&mut self) -> Option<CountVector> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current.clone();
        if self.remaining > 0 {
            advance(&mut self.current);
        }
        let k = out.iter().sum();
        Some(CountVector { counts: out, k })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// Moves `c` to its successor in lexicographically decreasing order. Returns false at the end.
pub(crate) fn advance(c: &mut [u64]) -> bool {
    let n = c.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| c[i] > 0) else {
        return false;
    };
    let tail: u64 = c[i + 1..].iter().sum();
    c[i] -= 1;
    c[i + 1] = tail + 1;
    c[i + 2..].iter_mut().for_each(|v| *v = 0);
    true
}

/// Every composition of `k` into `n ≥ 1` parts, lexicographically decreasing.
///
/// # Panics
/// If the number of compositions does not fit in `u64`.
pub fn enumerate_k_uniform(n: usize, k: u64) -> KUniform {
    let total = composition_count(n, k).expect("composition count overflows u64");
    enumerate_range(n, k, 0, total)
}

/// The compositions with global indices in `start..end`.
pub fn enumerate_range(n: usize, k: u64, start: u64, end: u64) -> KUniform {
    let total = composition_count(n, k).unwrap_or(u64::MAX);
    let end = end.min(total);
    if start >= end {
        return KUniform { current: vec![0; n], remaining: 0 };
    }
    KUniform { current: unrank(n, k, start), remaining: end - start }
}

/// The contiguous share of worker `worker` out of `workers`.
pub fn enumerate_worker(n: usize, k: u64, worker: usize, workers: usize) -> KUniform {
    let total = composition_count(n, k).expect("composition count overflows u64");
    let (start, end) = worker_range(total, worker, workers);
    enumerate_range(n, k, start, end)
}

/// Splits `0..total` into `workers` contiguous ranges; returns the one for `worker`.
pub fn worker_range(total: u64, worker: usize, workers: usize) -> (u64, u64) {
    let w = workers.max(1) as u128;
    let i = worker as u128;
    let t = total as u128;
    ((t * i / w) as u64, (t * (i + 1).min(w) / w) as u64)
}

/// The composition at global position `index` of the lexicographically decreasing order.
pub fn unrank(n: usize, k: u64, mut index: u64) -> Vec<u64> {
    let mut out = vec![0; n];
    let mut rem = k;
    for i in 0..n.saturating_sub(1) {
        let parts_after = n - i - 1;
        let mut v = rem;
        loop {
            let block = composition_count(parts_after, rem - v).unwrap_or(u64::MAX);
            if index < block {
                break;
            }
            index -= block;
            v -= 1;
        }
        out[i] = v;
        rem -= v;
    }
    if n > 0 {
        out[n - 1] = rem;
    }
    out
}

/// Results above this are not exactly representable and are reported as a cap failure.
const EXACT_LIMIT: f64 = 9_007_199_254_740_992.0;

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

fn exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "p", value: p })
    }
}

fn to_count(x: f64) -> Result<u64> {
    let c = ceil_snapped(x).max(1.0);
    if c > EXACT_LIMIT {
        return Err(Error::SelectorCapExceeded { cap: EXACT_LIMIT as u64 });
    }
    Ok(c as u64)
}

/// `⌈16·M²·λ²·p·γ²/ε²⌉`.
pub fn k_for_lipschitz(players: usize, lambda: f64, p: f64, gamma: f64, epsilon: f64) -> Result<u64> {
    k_for_lipschitz_with(players, lambda, p, gamma, epsilon, 2)
}

/// `⌈16·M^e·λ²·p·γ²/ε²⌉` with the exponent `e` of `M` chosen by the caller (1 or 2).
pub fn k_for_lipschitz_with(
    players: usize,
    lambda: f64,
    p: f64,
    gamma: f64,
    epsilon: f64,
    m_exponent: u32,
) -> Result<u64> {
    if players == 0 {
        return Err(Error::Empty);
    }
    positive("lambda", lambda)?;
    exponent(p)?;
    positive("gamma", gamma)?;
    positive("epsilon", epsilon)?;
    let m = crate::math::pow(players as f64, m_exponent as f64);
    to_count(16.0 * m * lambda * lambda * p * gamma * gamma / (epsilon * epsilon))
}

/// `⌈4·λ²·p·γ²/δ²⌉`.
pub fn l_for_regret(lambda: f64, p: f64, gamma: f64, delta: f64) -> Result<u64> {
    positive("lambda", lambda)?;
    exponent(p)?;
    positive("gamma", gamma)?;
    positive("delta", delta)?;
    to_count(4.0 * lambda * lambda * p * gamma * gamma / (delta * delta))
}

/// `⌈17·λ²·√p/ε²⌉`.
pub fn l_for_penalty_br(lambda: f64, p: f64, epsilon: f64) -> Result<u64> {
    positive("lambda", lambda)?;
    exponent(p)?;
    positive("epsilon", epsilon)?;
    to_count(17.0 * lambda * lambda * sqrt(p) / (epsilon * epsilon))
}

/// Default cap on [`k_for_penalty`].
pub const PENALTY_K_CAP: u64 = 1_000_000_000;

/// `B(k) = 2·(4·e^(−kε²/8) + 8λ√p/(ε√k) + n·e^(−kε²/2))`.
pub fn penalty_failure_bound(n: usize, lambda: f64, p: f64, epsilon: f64, k: u64) -> f64 {
    let k = k as f64;
    let e2 = epsilon * epsilon;
    2.0 * (4.0 * exp(-k * e2 / 8.0)
        + 8.0 * lambda * sqrt(p) / (epsilon * sqrt(k))
        + n as f64 * exp(-k * e2 / 2.0))
}

/// Smallest `k ≥ 1` with `B(k) < 1`, capped at [`PENALTY_K_CAP`].
pub fn k_for_penalty(n: usize, lambda: f64, p: f64, epsilon: f64) -> Result<u64> {
    k_for_penalty_capped(n, lambda, p, epsilon, PENALTY_K_CAP)
}

/// [`k_for_penalty`] with an explicit cap.
pub fn k_for_penalty_capped(n: usize, lambda: f64, p: f64, epsilon: f64, cap: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Empty);
    }
    positive("lambda", lambda)?;
    positive("epsilon", epsilon)?;
    if !(p.is_finite() && p >= 2.0) {
        return Err(Error::InvalidParameter { name: "p", value: p });
    }
    let ok = |k: u64| penalty_failure_bound(n, lambda, p, epsilon, k) < 1.0;
    let mut hi = 1u64;
    while !ok(hi) {
        if hi >= cap {
            return Err(Error::SelectorCapExceeded { cap });
        }
        hi = (hi * 2).min(cap);
    }
    // invariant: ok(hi), and !ok(lo) unless lo == 0
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
