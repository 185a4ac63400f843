//! Brute-force oracles: grid search over l-uniform points, exhaustive support enumeration for
//! the quadratic program, an exact lattice maximizer for the biased penalties, and the
//! ε-equilibrium check.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{check_dim, penalty_value, ConvexStrategySpace, Game, MixedStrategy, NormKind};
use crate::math::{dot, order_desc};
use crate::uniform::{composition_count, enumerate_range, CountVector};

/// Best grid point found in some index range.
#[derive(Debug, Clone, PartialEq)]
pub struct GridBest {
    /// Global enumeration index of the point.
    pub index: u64,
    /// The l-uniform point in count form.
    pub counts: CountVector,
    /// Its value.
    pub value: f64,
}

impl GridBest {
    /// Deterministic reduction: higher value wins, ties go to the lower index.
    pub fn better(self, other: GridBest) -> GridBest {
        if other.value > self.value || (other.value == self.value && other.index < self.index) {
            other
        } else {
            self
        }
    }
}

/// Maximizes `value_fn` over the l-uniform points of `space` with indices in `start..end`.
/// Ties go to the earliest point.
pub fn grid_best_response_range<F>(
    value_fn: F,
    space: &ConvexStrategySpace,
    l: u64,
    start: u64,
    end: u64,
) -> Result<Option<GridBest>>
where
    F: Fn(&[f64]) -> f64,
{
    if l == 0 {
        return Err(Error::InvalidParameter { name: "l", value: 0.0 });
    }
    let mut point = vec![0.0; space.dim()];
    let mut weights = vec![0.0; space.vertex_count()];
    let inv = 1.0 / l as f64;
    let mut best: Option<GridBest> = None;
    for (offset, counts) in enumerate_range(space.vertex_count(), l, start, end).enumerate() {
        for (w, c) in weights.iter_mut().zip(counts.counts()) {
            *w = *c as f64 * inv;
        }
        space.point_into(&weights, &mut point);
        let value = value_fn(&point);
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(GridBest { index: start + offset as u64, counts, value });
        }
    }
    Ok(best)
}

/// Number of l-uniform points of an `n`-vertex space, failing on overflow.
pub fn grid_size(n: usize, l: u64) -> Result<u64> {
    composition_count(n, l).ok_or(Error::BudgetExceeded {
        estimated: crate::uniform::composition_count_f64(n, l),
        budget: u64::MAX as f64,
    })
}

/// Maximizes `value_fn` over every l-uniform point of `space`; ties go to the first point in
/// enumeration order.
pub fn grid_best_response<F>(value_fn: F, space: &ConvexStrategySpace, l: u64) -> Result<(CountVector, f64)>
where
    F: Fn(&[f64]) -> f64,
{
    let total = grid_size(space.vertex_count(), l)?;
    let best = grid_best_response_range(value_fn, space, l, 0, total)?.ok_or(Error::Empty)?;
    Ok((best.counts, best.value))
}

/// Largest `n` accepted by [`exhaustive_quadratic_br`].
pub const EXHAUSTIVE_MAX_N: usize = 20;

/// Maximizes `xᵀpayoffs − d·‖x − base‖₂²` by solving the stationarity system on every one of
/// the `2ⁿ − 1` supports. Pass a zero base for the inner-product penalty.
pub fn exhaustive_quadratic_br(payoffs: &[f64], base: &[f64], d: f64) -> Result<MixedStrategy> {
    let n = payoffs.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    check_dim(n, base.len())?;
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::OracleTooLarge { n, max: EXHAUSTIVE_MAX_N });
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter { name: "d", value: d });
    }
    let alpha: Vec<f64> = payoffs.iter().zip(base).map(|(a, b)| a + 2.0 * d * b).collect();
    let mut best: Option<(f64, MixedStrategy)> = None;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as f64;
        let members = (0..n).filter(|i| mask >> i & 1 == 1);
        let sum: f64 = members.clone().map(|i| alpha[i]).sum();
        let lambda = (sum - 2.0 * d) / size;
        let mut x = vec![0.0; n];
        let mut feasible = true;
        for i in members {
            let v = (alpha[i] - lambda) / (2.0 * d);
            if v < -crate::PROB_TOL || !v.is_finite() {
                feasible = false;
                break;
            }
            x[i] = v.max(0.0);
        }
        if !feasible {
            continue;
        }
        let x = MixedStrategy::normalized(x)?;
        let diff: f64 = x.probs().iter().zip(base).map(|(a, b)| (a - b) * (a - b)).sum();
        let utility = dot(x.probs(), payoffs) - d * diff;
        if best.as_ref().is_none_or(|(u, _)| utility > *u) {
            best = Some((utility, x));
        }
    }
    best.map(|(_, x)| x).ok_or(Error::Empty)
}

/// Exact maximizer of `xᵀpayoffs − d·b(x, base)` over the l-uniform points of the simplex.
///
/// L1, L2² and the inner product are separable and concave per coordinate, so handing out the
/// `l` units one at a time to the largest marginal gain is optimal. For L∞ the optimal budget
/// `t = max_i |c_i/l − base_i|` is one of the values `|c/l − base_i|`, and for each such `t`
/// the best point inside the box is a greedy fill in payoff order.
pub fn lattice_best_response(
    norm: NormKind,
    payoffs: &[f64],
    base: &[f64],
    d: f64,
    l: u64,
) -> Result<(CountVector, f64)> {
    let n = payoffs.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    check_dim(n, base.len())?;
    if l == 0 {
        return Err(Error::InvalidParameter { name: "l", value: 0.0 });
    }
    let lf = l as f64;
    let value = |counts: &[u64]| -> Result<f64> {
        let x: Vec<f64> = counts.iter().map(|&c| c as f64 / lf).collect();
        Ok(dot(&x, payoffs) - d * penalty_value(&x, base, norm)?)
    };
    let counts = match norm {
        NormKind::Linf => linf_lattice(payoffs, base, d, l)?,
        _ => {
            let term = |i: usize, c: u64| {
                let x = c as f64 / lf;
                let dev = x - base[i];
                let pen = match norm {
                    NormKind::L1 => dev.abs(),
                    NormKind::L2Sq => dev * dev,
                    _ => x * x,
                };
                payoffs[i] * x - d * pen
            };
            let mut counts = vec![0u64; n];
            for _ in 0..l {
                let mut pick = 0;
                let mut gain = f64::NEG_INFINITY;
                for i in 0..n {
                    let g = term(i, counts[i] + 1) - term(i, counts[i]);
                    if g > gain {
                        gain = g;
                        pick = i;
                    }
                }
                counts[pick] += 1;
            }
            counts
        }
    };
    let v = value(&counts)?;
    Ok((CountVector::new(counts)?, v))
}

fn linf_lattice(payoffs: &[f64], base: &[f64], d: f64, l: u64) -> Result<Vec<u64>> {
    let n = payoffs.len();
    let lf = l as f64;
    let order = order_desc(payoffs);
    let mut budgets: Vec<f64> = Vec::with_capacity(n * (l as usize + 1));
    for &b in base {
        for c in 0..=l {
            budgets.push((c as f64 / lf - b).abs());
        }
    }
    budgets.sort_by(f64::total_cmp);
    budgets.dedup();
    let mut best: Option<(f64, Vec<u64>)> = None;
    for t in budgets {
        let lo: Vec<u64> = base
            .iter()
            .map(|b| libm::ceil(lf * (b - t) - 1e-9).max(0.0) as u64)
            .collect();
        let hi: Vec<u64> = base
            .iter()
            .map(|b| (libm::floor(lf * (b + t) + 1e-9).min(lf)) as u64)
            .collect();
        let low_sum: u64 = lo.iter().sum();
        let high_sum: u64 = hi.iter().sum();
        if low_sum > l || high_sum < l || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            continue;
        }
        let mut counts = lo;
        let mut rem = l - low_sum;
        for &j in &order {
            let add = (hi[j] - counts[j]).min(rem);
            counts[j] += add;
            rem -= add;
        }
        let x: Vec<f64> = counts.iter().map(|&c| c as f64 / lf).collect();
        let value = dot(&x, payoffs) - d * penalty_value(&x, base, NormKind::Linf)?;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, counts));
        }
    }
    best.map(|(_, c)| c).ok_or(Error::Empty)
}

/// Outcome of [`verify_epsilon_equilibrium`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verification {
    /// Every regret is at most `ε + 1e−9`.
    Holds,
    /// The player with the largest regret above the threshold (lowest index on ties).
    Fails {
        /// Violating player.
        player: usize,
        /// Their regret.
        gap: f64,
    },
}

impl Verification {
    /// True for [`Verification::Holds`].
    pub fn holds(&self) -> bool {
        matches!(self, Verification::Holds)
    }
}

/// Checks `T_i(profile) ≥ br_values[i] − ε` for every player.
pub fn verify_epsilon_equilibrium<G: Game + ?Sized>(
    game: &G,
    profile: &[MixedStrategy],
    epsilon: f64,
    br_values: &[f64],
) -> Result<Verification> {
    check_dim(game.players(), profile.len())?;
    check_dim(game.players(), br_values.len())?;
    let mut worst: Option<(usize, f64)> = None;
    for (player, &br) in br_values.iter().enumerate() {
        let gap = (br - game.utility(profile, player)?).max(0.0);
        if gap > epsilon + 1e-9 && worst.is_none_or(|(_, g)| gap > g) {
            worst = Some((player, gap));
        }
    }
    Ok(match worst {
        None => Verification::Holds,
        Some((player, gap)) => Verification::Fails { player, gap },
    })
}
