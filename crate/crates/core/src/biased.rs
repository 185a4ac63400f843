//! Exact best responses for distance-biased players.
//!
//! All routines take the vector of pure-strategy payoffs against the fixed opponent (`R·y` for
//! the row player, `Cᵀ·x` for the column player), the base strategy and the weight `d`, and
//! maximize `xᵀpayoffs − d·b(x, base)` over the simplex.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{check_dim, penalty_value, BimatrixGame, MixedStrategy, NormKind, PROB_TOL};
use crate::math::{argmax, dot, floor, order_desc};

/// A pure strategy with its score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredStrategy {
    /// Pure strategy id.
    pub index: usize,
    /// `payoff + 2d·base` in the quadratic case, the raw payoff otherwise.
    pub alpha: f64,
}

/// High/middle/low split of the pure strategies used by the shifting procedure for L∞.
#[derive(Debug, Clone, PartialEq)]
pub struct LinfPartition {
    /// Indices tied with the best payoff, in index order.
    pub high: Vec<usize>,
    /// Indices within `d` of the best payoff, in payoff order.
    pub mid: Vec<usize>,
    /// Indices more than `d` below the best payoff, in payoff order.
    pub low: Vec<usize>,
    /// Largest base probability over `low` (0 if empty).
    pub p_max: f64,
    /// Total base probability over `low`.
    pub low_mass: f64,
}

/// One stationary point of the quadratic program, restricted to a prefix support.
#[derive(Debug, Clone, PartialEq)]
pub struct KktSolution {
    /// Size of the support prefix.
    pub support_size: usize,
    /// Multiplier of the simplex constraint.
    pub multiplier: f64,
    /// The candidate strategy.
    pub strategy: MixedStrategy,
    /// `Σ x_i·α_i − d·Σ x_i²`, the utility up to a constant.
    pub utility: f64,
}

/// Utility `xᵀpayoffs − d·b(x, base)` of a best-response candidate.
pub fn response_utility(norm: NormKind, payoffs: &[f64], base: &[f64], d: f64, x: &[f64]) -> Result<f64> {
    check_dim(payoffs.len(), x.len())?;
    let penalty = if d == 0.0 { 0.0 } else { penalty_value(x, base, norm)? };
    Ok(dot(x, payoffs) - d * penalty)
}

fn check_inputs(payoffs: &[f64], base: &[f64]) -> Result<()> {
    if payoffs.is_empty() {
        return Err(Error::Empty);
    }
    check_dim(payoffs.len(), base.len())
}

fn check_weight(d: f64) -> Result<()> {
    if d.is_finite() && d >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "d", value: d })
    }
}

/// Pure best response of an unbiased player: the lowest-index maximizer.
pub fn best_response_pure(payoffs: &[f64]) -> Result<MixedStrategy> {
    if payoffs.is_empty() {
        return Err(Error::Empty);
    }
    Ok(MixedStrategy::pure(payoffs.len(), argmax(payoffs)))
}

/// Best response under `d·‖x − base‖₁`.
///
/// Let `b` be the lowest-index best payoff. Every other strategy keeps its base probability when
/// its payoff is within `2d` of `b`'s and hands it to `b` otherwise.
pub fn best_response_l1(payoffs: &[f64], base: &[f64], d: f64) -> Result<MixedStrategy> {
    check_inputs(payoffs, base)?;
    check_weight(d)?;
    let b = argmax(payoffs);
    let top = payoffs[b];
    let mut x = base.to_vec();
    for i in 0..payoffs.len() {
        if i != b && top - payoffs[i] - 2.0 * d > 0.0 {
            x[b] += x[i];
            x[i] = 0.0;
        }
    }
    // moving mass keeps the sum of the validated base, so an unmoved base comes back bit-exact
    MixedStrategy::new(x)
}

/// Strategies sorted by `α_i = payoffs_i + 2d·base_i`, descending, ties by lower index.
pub fn scored_order(payoffs: &[f64], base: &[f64], d: f64) -> Vec<ScoredStrategy> {
    let alpha: Vec<f64> = payoffs.iter().zip(base).map(|(a, b)| a + 2.0 * d * b).collect();
    order_desc(&alpha).into_iter().map(|index| ScoredStrategy { index, alpha: alpha[index] }).collect()
}

/// The feasible prefix-support candidates of the quadratic program, in order of support size.
pub fn quadratic_candidates(payoffs: &[f64], base: &[f64], d: f64) -> Result<Vec<KktSolution>> {
    check_inputs(payoffs, base)?;
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter { name: "d", value: d });
    }
    let n = payoffs.len();
    let order = scored_order(payoffs, base, d);
    let mut out = Vec::new();
    let mut sum = 0.0;
    'prefix: for k in 1..=n {
        sum += order[k - 1].alpha;
        let multiplier = (sum - 2.0 * d) / k as f64;
        let mut x = vec![0.0; n];
        for s in &order[..k] {
            let v = (s.alpha - multiplier) / (2.0 * d);
            if v < -PROB_TOL {
                continue 'prefix;
            }
            x[s.index] = v.max(0.0);
        }
        let strategy = MixedStrategy::normalized(x)?;
        let utility = order[..k]
            .iter()
            .map(|s| {
                let v = strategy.probs()[s.index];
                v * s.alpha - d * v * v
            })
            .sum();
        out.push(KktSolution { support_size: k, multiplier, strategy, utility });
    }
    Ok(out)
}

/// Best response under `d·‖x − base‖₂²` (pass a zero base for the inner-product penalty).
///
/// The optimum is supported on a prefix of the α order; every feasible prefix is solved in
/// closed form and the best one is kept, ties going to the smaller support.
pub fn best_response_quadratic(payoffs: &[f64], base: &[f64], d: f64) -> Result<MixedStrategy> {
    Ok(best_quadratic_candidate(payoffs, base, d)?.strategy)
}

/// The winning [`KktSolution`] of [`best_response_quadratic`].
pub fn best_quadratic_candidate(payoffs: &[f64], base: &[f64], d: f64) -> Result<KktSolution> {
    let mut best: Option<KktSolution> = None;
    for c in quadratic_candidates(payoffs, base, d)? {
        match &best {
            Some(b) if c.utility <= b.utility + 1e-12 => {}
            _ => best = Some(c),
        }
    }
    // the largest-α singleton always has x = 1 + (α_1 − α_1)/2d ≥ 0, so a candidate exists
    best.ok_or(Error::Empty)
}

/// Partition used by [`best_response_linf_shift`].
pub fn linf_partition(payoffs: &[f64], base: &[f64], d: f64) -> Result<LinfPartition> {
    check_inputs(payoffs, base)?;
    check_weight(d)?;
    let top = payoffs[argmax(payoffs)];
    let (mut high, mut mid, mut low) = (Vec::new(), Vec::new(), Vec::new());
    for i in order_desc(payoffs) {
        if payoffs[i] == top {
            high.push(i);
        } else if top - payoffs[i] - d > 0.0 {
            low.push(i);
        } else {
            mid.push(i);
        }
    }
    let p_max = low.iter().map(|&i| base[i]).fold(0.0, f64::max);
    let low_mass = low.iter().map(|&i| base[i]).sum();
    Ok(LinfPartition { high, mid, low, p_max, low_mass })
}

/// The three-case shifting procedure for `d·‖x − base‖_∞`: mass of the low strategies is moved
/// onto the high and middle ones, at most `p_max` each where possible.
///
/// This is exact for `n ≤ 3`. For larger `n` it can fall short of the optimum, because it never
/// trades mass between two strategies that are both outside the low set; use
/// [`best_response_linf`] for an exact best response.
pub fn best_response_linf_shift(payoffs: &[f64], base: &[f64], d: f64) -> Result<MixedStrategy> {
    let part = linf_partition(payoffs, base, d)?;
    let mut x = base.to_vec();
    if part.low.is_empty() {
        return MixedStrategy::normalized(x);
    }
    for &i in &part.low {
        x[i] = 0.0;
    }
    let (p, pm) = (part.low_mass, part.p_max);
    let h = part.high.len() as f64;
    let upper: Vec<usize> = part.high.iter().chain(&part.mid).copied().collect();
    if p <= h * pm {
        for &i in &part.high {
            x[i] += p / h;
        }
    } else if p < upper.len() as f64 * pm {
        let full = (floor(p / pm) as usize).min(upper.len() - 1);
        for &i in &upper[..full] {
            x[i] += pm;
        }
        x[upper[full]] += p - full as f64 * pm;
    } else {
        for &i in &upper {
            x[i] += p / upper.len() as f64;
        }
    }
    MixedStrategy::normalized(x)
}

/// Exact best response under `d·‖x − base‖_∞`.
///
/// For a fixed deviation budget `t = ‖x − base‖_∞` the best strategy starts every coordinate at
/// `max(0, base_i − t)` and fills up to `min(1, base_i + t)` in payoff order. The value of that
/// fill is concave and piecewise linear in `t`, so only its breakpoints are evaluated.
pub fn best_response_linf(payoffs: &[f64], base: &[f64], d: f64) -> Result<MixedStrategy> {
    check_inputs(payoffs, base)?;
    check_weight(d)?;
    let order = order_desc(payoffs);
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    for &b in base {
        cuts.push(b);
        cuts.push(1.0 - b);
    }
    cuts.retain(|t| (0.0..=1.0).contains(t));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut candidates = cuts.clone();
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let mid = 0.5 * (t0 + t1);
        // on (t0, t1) each bound is affine in t: lo_j = base_j − t or 0, hi_j = base_j + t or 1
        for m in 0..=order.len() {
            let (mut c, mut slope) = (-1.0, 0.0);
            for (pos, &j) in order.iter().enumerate() {
                let b = base[j];
                if pos < m {
                    if b + mid < 1.0 {
                        c += b;
                        slope += 1.0;
                    } else {
                        c += 1.0;
                    }
                } else if b - mid > 0.0 {
                    c += b;
                    slope -= 1.0;
                }
            }
            if slope != 0.0 {
                let t = -c / slope;
                if t > t0 && t < t1 {
                    candidates.push(t);
                }
            }
        }
    }
    candidates.sort_by(f64::total_cmp);

    let mut best: Option<(f64, Vec<f64>)> = None;
    for t in candidates {
        let x = linf_fill(payoffs, base, &order, t);
        let value = response_utility(NormKind::Linf, payoffs, base, d, &x)?;
        match &best {
            Some((v, _)) if value <= *v + 1e-12 => {}
            _ => best = Some((value, x)),
        }
    }
    let (_, x) = best.ok_or(Error::Empty)?;
    MixedStrategy::new(x)
}

fn linf_fill(payoffs: &[f64], base: &[f64], order: &[usize], t: f64) -> Vec<f64> {
    let mut x: Vec<f64> = base.iter().map(|b| (b - t).max(0.0)).collect();
    let mut rem = 1.0 - x.iter().sum::<f64>();
    for &j in order {
        if rem <= 0.0 {
            break;
        }
        let room = (base[j] + t).min(1.0) - x[j];
        let add = room.min(rem).max(0.0);
        x[j] += add;
        rem -= add;
    }
    debug_assert_eq!(payoffs.len(), x.len());
    x
}

/// Exact best response for any norm. `base` must already be the effective base (zeros for
/// [`NormKind::Inner`]). With `d = 0` every norm reduces to the pure best response.
pub fn best_response(norm: NormKind, payoffs: &[f64], base: &[f64], d: f64) -> Result<MixedStrategy> {
    check_inputs(payoffs, base)?;
    check_weight(d)?;
    if d == 0.0 {
        return best_response_pure(payoffs);
    }
    match norm {
        NormKind::L1 => best_response_l1(payoffs, base, d),
        NormKind::L2Sq | NormKind::Inner => best_response_quadratic(payoffs, base, d),
        NormKind::Linf => best_response_linf(payoffs, base, d),
    }
}

/// Sufficient condition for the base strategy to be dominant for a player with `n` pure
/// strategies: `d ≥ 1/2` for L1 and `d ≥ max(1, ⌊n/2⌋)` for L∞. Never claimed for L2² or the
/// inner product.
pub fn is_base_dominant(norm: NormKind, d: f64, n: usize) -> bool {
    match norm {
        NormKind::L1 => d >= 0.5,
        NormKind::Linf => d >= ((n / 2).max(1)) as f64,
        NormKind::L2Sq | NormKind::Inner => false,
    }
}

/// Largest payoff gap between a supported pure strategy and the best pure strategy, over both
/// players. Zero at every Nash equilibrium of the bimatrix game.
pub fn wsne_quality(g: &BimatrixGame, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(g.n(), x.len())?;
    check_dim(g.n(), y.len())?;
    let gap = |payoffs: Vec<f64>, s: &[f64]| {
        let top = payoffs[argmax(&payoffs)];
        s.iter()
            .zip(&payoffs)
            .filter(|(p, _)| **p > PROB_TOL)
            .map(|(_, v)| top - v)
            .fold(0.0, f64::max)
    };
    Ok(gap(g.row_payoffs(y), x).max(gap(g.col_payoffs(x), y)))
}
