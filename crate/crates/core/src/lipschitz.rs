//! Guarantee evaluation on grids and the exhaustive k-uniform profile search.
//!
//! A [`Search`] walks every profile of k-uniform strategies in a fixed global order (player 0
//! most significant, each player's strategies lexicographically decreasing). The index range
//! can be split among workers that share one [`AtomicU64`] holding the lowest accepted index,
//! so the accepted profile does not depend on how the range was split.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::game::{check_dim, ApproxResult, LipschitzGame, MixedStrategy};
use crate::oracle::grid_best_response;
use crate::uniform::{
    advance, composition_count, composition_count_f64, k_for_lipschitz_with, l_for_regret, unrank,
    CountVector,
};

/// Outcome of a profile search.
#[derive(Debug, Clone, PartialEq)]
pub enum LipschitzVerdict {
    /// An accepted profile; its guarantee is below `2ε`, so it is a `3ε`-equilibrium.
    Equilibrium(ApproxResult),
    /// Every profile was rejected, so the game has no exact equilibrium.
    NoExactEquilibrium {
        /// The k that was searched.
        k_used: u64,
        /// Number of profiles evaluated.
        profiles_checked: u64,
    },
}

/// Which accepting profile a parallel scan returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// The first one in global order, independent of the number of workers.
    #[default]
    First,
    /// Whichever one a worker finds first.
    Any,
}

/// Knobs of [`find_equilibrium`] and of the penalty-game search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Use this k instead of the selector's.
    pub k_override: Option<u64>,
    /// Exponent of `M` in the Lipschitz k selector.
    pub m_exponent: u32,
    /// Largest admissible number of projected utility evaluations.
    pub budget: f64,
    /// Acceptance rule for parallel scans.
    pub mode: ScanMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { k_override: None, m_exponent: 2, budget: 1e9, mode: ScanMode::First }
    }
}

/// Per-player utilities and approximate best-deviation values at a profile given as weights.
pub trait Deviation {
    /// Number of players.
    fn players(&self) -> usize;
    /// Number of vertices (pure strategies) of `player`.
    fn parts(&self, player: usize) -> usize;
    /// Utility of `player` at the profile.
    fn utility(&self, player: usize, weights: &[Vec<f64>]) -> Result<f64>;
    /// Best value `player` finds when deviating; depends only on the other players' weights.
    fn best_deviation(&self, player: usize, weights: &[Vec<f64>]) -> Result<f64>;
    /// Projected utility evaluations for one call of [`Deviation::best_deviation`] per player.
    fn deviation_cost(&self) -> f64;
}

struct LipschitzDeviation<'a> {
    game: &'a LipschitzGame,
    l: u64,
}

impl LipschitzDeviation<'_> {
    fn points(&self, weights: &[Vec<f64>]) -> Vec<Vec<f64>> {
        weights.iter().enumerate().map(|(i, w)| self.game.space(i).point(w)).collect()
    }
}

impl Deviation for LipschitzDeviation<'_> {
    fn players(&self) -> usize {
        self.game.players()
    }

    fn parts(&self, player: usize) -> usize {
        self.game.space(player).vertex_count()
    }

    fn utility(&self, player: usize, weights: &[Vec<f64>]) -> Result<f64> {
        let points = self.points(weights);
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        Ok(self.game.utility_at_points(player, &refs))
    }

    fn best_deviation(&self, player: usize, weights: &[Vec<f64>]) -> Result<f64> {
        let points = self.points(weights);
        let value = |candidate: &[f64]| {
            let mut refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
            refs[player] = candidate;
            self.game.utility_at_points(player, &refs)
        };
        Ok(grid_best_response(value, self.game.space(player), self.l)?.1)
    }

    fn deviation_cost(&self) -> f64 {
        (0..self.players()).map(|i| composition_count_f64(self.parts(i), self.l)).sum()
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// `δ + max_i R_i`, where `R_i` is player `i`'s regret against the best `l`-uniform deviation
/// with `l = ⌈4λ²pγ²/δ²⌉`, clamped at zero. The true guarantee of the profile lies within `δ`
/// of the result. `profile` holds one weight vector per player over that player's vertices.
pub fn evaluate_guarantee(g: &LipschitzGame, profile: &[MixedStrategy], delta: f64) -> Result<f64> {
    check_positive("delta", delta)?;
    check_dim(g.players(), profile.len())?;
    for (i, s) in profile.iter().enumerate() {
        check_dim(g.space(i).vertex_count(), s.len())?;
    }
    let l = l_for_regret(g.lambda(), g.norm_exponent(), g.gamma(), delta)?;
    let dev = LipschitzDeviation { game: g, l };
    let weights: Vec<Vec<f64>> = profile.iter().map(|s| s.probs().to_vec()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..g.players() {
        let r = dev.best_deviation(i, &weights)? - dev.utility(i, &weights)?;
        worst = worst.max(r);
    }
    Ok(delta + worst)
}

type Memo = BTreeMap<(usize, Vec<u64>), f64>;

/// An exhaustive scan over the k-uniform profiles of a game.
pub struct Search<'a> {
    deviation: Box<dyn Deviation + Sync + 'a>,
    k: u64,
    epsilon: f64,
    totals: Vec<u64>,
    total: u64,
    mode: ScanMode,
    method: &'static str,
}

impl<'a> Search<'a> {
    /// Sets up a scan with guarantee shift and acceptance threshold derived from `epsilon`.
    /// Fails with [`Error::BudgetExceeded`] when the projected work is above `budget`.
    pub fn new(
        deviation: Box<dyn Deviation + Sync + 'a>,
        k: u64,
        epsilon: f64,
        budget: f64,
        mode: ScanMode,
        method: &'static str,
    ) -> Result<Self> {
        check_positive("epsilon", epsilon)?;
        if k == 0 {
            return Err(Error::InvalidParameter { name: "k", value: 0.0 });
        }
        let players = deviation.players();
        let profiles: f64 = (0..players).map(|i| composition_count_f64(deviation.parts(i), k)).product();
        let estimated = profiles * deviation.deviation_cost();
        // written so that a NaN estimate is rejected too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(estimated <= budget) {
            return Err(Error::BudgetExceeded { estimated, budget });
        }
        let mut totals = Vec::with_capacity(players);
        let mut total: u64 = 1;
        for i in 0..players {
            let t = composition_count(deviation.parts(i), k)
                .ok_or(Error::BudgetExceeded { estimated, budget })?;
            total = total.checked_mul(t).ok_or(Error::BudgetExceeded { estimated, budget })?;
            totals.push(t);
        }
        Ok(Search { deviation, k, epsilon, totals, total, mode, method })
    }

    /// The k being searched.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Number of profiles.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Acceptance rule.
    pub fn mode(&self) -> ScanMode {
        self.mode
    }

    fn decode(&self, mut index: u64) -> Vec<(u64, Vec<u64>)> {
        let mut out = vec![(0, Vec::new()); self.totals.len()];
        for i in (0..self.totals.len()).rev() {
            let idx = index % self.totals[i];
            index /= self.totals[i];
            out[i] = (idx, unrank(self.deviation.parts(i), self.k, idx));
        }
        out
    }

    /// Guarantee and clamped regrets of the profile with the given counts.
    fn evaluate(&self, counts: &[Vec<u64>], memo: &mut Memo) -> Result<(f64, Vec<f64>)> {
        let kf = self.k as f64;
        let weights: Vec<Vec<f64>> =
            counts.iter().map(|c| c.iter().map(|&v| v as f64 / kf).collect()).collect();
        let mut regrets = Vec::with_capacity(counts.len());
        for i in 0..counts.len() {
            let key: Vec<u64> = counts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .flat_map(|(_, c)| c.iter().copied())
                .collect();
            let best = match memo.get(&(i, key)) {
                Some(v) => *v,
                None => {
                    let v = self.deviation.best_deviation(i, &weights)?;
                    let key = counts
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .flat_map(|(_, c)| c.iter().copied())
                        .collect();
                    memo.insert((i, key), v);
                    v
                }
            };
            regrets.push((best - self.deviation.utility(i, &weights)?).max(0.0));
        }
        let guarantee = self.epsilon + regrets.iter().copied().fold(0.0, f64::max);
        Ok((guarantee, regrets))
    }

    /// Scans the profiles with indices in `start..end` in order. Stops early once `bound`
    /// (the lowest accepted index so far, `u64::MAX` if none) makes the rest irrelevant, and
    /// lowers `bound` on acceptance.
    pub fn scan(&self, start: u64, end: u64, bound: &AtomicU64) -> Result<()> {
        let end = end.min(self.total);
        if start >= end {
            return Ok(());
        }
        let mut state = self.decode(start);
        let mut memo = Memo::new();
        for index in start..end {
            let seen = bound.load(Ordering::Acquire);
            let stop = match self.mode {
                ScanMode::First => seen <= index,
                ScanMode::Any => seen != u64::MAX,
            };
            if stop {
                return Ok(());
            }
            let counts: Vec<Vec<u64>> = state.iter().map(|(_, c)| c.clone()).collect();
            let (guarantee, _) = self.evaluate(&counts, &mut memo)?;
            if guarantee < 2.0 * self.epsilon {
                bound.fetch_min(index, Ordering::AcqRel);
                return Ok(());
            }
            for i in (0..state.len()).rev() {
                let (idx, c) = &mut state[i];
                if *idx + 1 < self.totals[i] {
                    *idx += 1;
                    advance(c);
                    break;
                }
                *idx = 0;
                c.iter_mut().for_each(|v| *v = 0);
                c[0] = self.k;
            }
        }
        Ok(())
    }

    /// The verdict once every worker has finished, given the final value of the shared bound.
    pub fn verdict(&self, bound: u64) -> Result<LipschitzVerdict> {
        if bound == u64::MAX {
            return Ok(LipschitzVerdict::NoExactEquilibrium {
                k_used: self.k,
                profiles_checked: self.total,
            });
        }
        let counts: Vec<Vec<u64>> = self.decode(bound).into_iter().map(|(_, c)| c).collect();
        let (guarantee, regrets) = self.evaluate(&counts, &mut Memo::new())?;
        let profile = counts
            .into_iter()
            .map(|c| CountVector::new(c)?.to_strategy())
            .collect::<Result<Vec<_>>>()?;
        Ok(LipschitzVerdict::Equilibrium(ApproxResult {
            profile,
            regrets,
            guarantee,
            method: String::from(self.method),
            runtime_ms: 0.0,
            delta: Some(self.epsilon),
            analytic_bound: Some(3.0 * self.epsilon),
        }))
    }

    /// Scans everything on the calling thread.
    pub fn run(&self) -> Result<LipschitzVerdict> {
        let bound = AtomicU64::new(u64::MAX);
        self.scan(0, self.total, &bound)?;
        self.verdict(bound.load(Ordering::Acquire))
    }
}

/// Sets up the profile search for a Lipschitz game: `k` from the override or the selector,
/// guarantees evaluated with `δ = ε`.
pub fn lipschitz_search<'a>(g: &'a LipschitzGame, epsilon: f64, config: &SearchConfig) -> Result<Search<'a>> {
    check_positive("epsilon", epsilon)?;
    let k = match config.k_override {
        Some(k) => k,
        None => k_for_lipschitz_with(
            g.players(),
            g.lambda(),
            g.norm_exponent(),
            g.gamma(),
            epsilon,
            config.m_exponent,
        )?,
    };
    let l = l_for_regret(g.lambda(), g.norm_exponent(), g.gamma(), epsilon)?;
    Search::new(
        Box::new(LipschitzDeviation { game: g, l }),
        k,
        epsilon,
        config.budget,
        config.mode,
        "lipschitz",
    )
}

/// Returns the first k-uniform profile whose evaluated guarantee is below `2ε`, or
/// [`LipschitzVerdict::NoExactEquilibrium`] after rejecting all of them.
pub fn find_equilibrium(g: &LipschitzGame, epsilon: f64, config: &SearchConfig) -> Result<LipschitzVerdict> {
    lipschitz_search(g, epsilon, config)?.run()
}
