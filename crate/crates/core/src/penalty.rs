//! Approximate best responses and the k-uniform profile search for two-player penalty games.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{check_dim, utility_penalty, ConvexStrategySpace, MixedStrategy, PenaltyGame, Player};
use crate::lipschitz::{Deviation, LipschitzVerdict, Search, SearchConfig};
use crate::math::dot;
use crate::oracle::grid_best_response;
use crate::uniform::{composition_count_f64, k_for_penalty, l_for_penalty_br};

fn player_of(index: usize) -> Player {
    if index == 0 {
        Player::Row
    } else {
        Player::Col
    }
}

/// Best l-uniform response of `player` against `opponent` with `l = ⌈17λ²√p/ε²⌉` taken from
/// the player's penalty. Its value is within `ε` of the exact best-response value.
pub fn approx_best_response_penalty(
    g: &PenaltyGame,
    player: Player,
    opponent: &[f64],
    epsilon: f64,
) -> Result<(MixedStrategy, f64)> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon });
    }
    let n = g.game().n();
    check_dim(n, opponent.len())?;
    let spec = g.penalty(player);
    let l = l_for_penalty_br(spec.lambda(), spec.norm_exponent(), epsilon)?;
    let payoffs = g.game().payoffs(player, opponent);
    let (counts, value) =
        grid_best_response(|x| dot(x, &payoffs) - spec.eval(x), &ConvexStrategySpace::simplex(n), l)?;
    Ok((counts.to_strategy()?, value))
}

struct PenaltyDeviation<'a> {
    game: &'a PenaltyGame,
    epsilon: f64,
}

impl Deviation for PenaltyDeviation<'_> {
    fn players(&self) -> usize {
        2
    }

    fn parts(&self, _player: usize) -> usize {
        self.game.game().n()
    }

    fn utility(&self, player: usize, weights: &[Vec<f64>]) -> Result<f64> {
        utility_penalty(self.game, &weights[0], &weights[1], player_of(player))
    }

    fn best_deviation(&self, player: usize, weights: &[Vec<f64>]) -> Result<f64> {
        let opponent = &weights[1 - player];
        Ok(approx_best_response_penalty(self.game, player_of(player), opponent, self.epsilon)?.1)
    }

    fn deviation_cost(&self) -> f64 {
        let n = self.game.game().n();
        [Player::Row, Player::Col]
            .iter()
            .map(|&p| {
                let spec = self.game.penalty(p);
                l_for_penalty_br(spec.lambda(), spec.norm_exponent(), self.epsilon)
                    .map_or(f64::INFINITY, |l| composition_count_f64(n, l))
            })
            .sum()
    }
}

/// Sets up the profile search for a penalty game. `k` comes from the override or from the
/// failure-bound selector at the larger λ and p of the two penalties.
pub fn qptas_search<'a>(g: &'a PenaltyGame, epsilon: f64, config: &SearchConfig) -> Result<Search<'a>> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon });
    }
    let k = match config.k_override {
        Some(k) => k,
        None => {
            let (r, c) = (g.penalty(Player::Row), g.penalty(Player::Col));
            k_for_penalty(
                g.game().n(),
                r.lambda().max(c.lambda()),
                r.norm_exponent().max(c.norm_exponent()),
                epsilon,
            )?
        }
    };
    Search::new(
        Box::new(PenaltyDeviation { game: g, epsilon }),
        k,
        epsilon,
        config.budget,
        config.mode,
        "qptas",
    )
}

/// Returns the first pair of k-uniform strategies whose evaluated guarantee is below `2ε`, or
/// [`LipschitzVerdict::NoExactEquilibrium`].
pub fn qptas(g: &PenaltyGame, epsilon: f64, config: &SearchConfig) -> Result<LipschitzVerdict> {
    qptas_search(g, epsilon, config)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{BimatrixGame, NormKind, PenaltySpec};
    use crate::oracle::exhaustive_quadratic_br;
    use alloc::vec;

    fn zero(game: BimatrixGame) -> PenaltyGame {
        PenaltyGame::new(game, PenaltySpec::zero(2.0).unwrap(), PenaltySpec::zero(2.0).unwrap())
    }

    #[test]
    fn zero_penalty_is_pure_best_response() {
        let game = BimatrixGame::new(vec![vec![0.2, 0.9], vec![0.4, 0.1]], vec![vec![0.0; 2]; 2]).unwrap();
        let g = zero(game);
        let (x, v) = approx_best_response_penalty(&g, Player::Row, &[0.5, 0.5], 0.1).unwrap();
        assert_eq!(x.probs(), &[1.0, 0.0]);
        assert!((v - 0.55).abs() < 1e-15);
    }

    #[test]
    fn inner_penalty_close_to_exhaustive() {
        let game = BimatrixGame::new(vec![vec![1.0, 1.0], vec![0.0, 0.0]], vec![vec![0.0; 2]; 2]).unwrap();
        let inner = PenaltySpec::from_norm(NormKind::Inner, vec![0.0; 2], 1.0, 2.0).unwrap();
        let g = PenaltyGame::new(game, inner, PenaltySpec::zero(2.0).unwrap());
        let (_, v) = approx_best_response_penalty(&g, Player::Row, &[0.5, 0.5], 0.05).unwrap();
        let exact = exhaustive_quadratic_br(&[1.0, 0.0], &[0.0, 0.0], 1.0).unwrap();
        let best = exact.probs()[0] - (exact.probs()[0].powi(2) + exact.probs()[1].powi(2));
        assert!((best - 0.125).abs() < 1e-12);
        assert!(v <= best + 1e-12 && v >= best - 0.05);
    }

    #[test]
    fn l1_penalty_in_zero_game_stays_near_base() {
        let base = vec![0.33, 0.67];
        let l1 = PenaltySpec::from_norm(NormKind::L1, base.clone(), 1.0, 2.0).unwrap();
        let g = PenaltyGame::new(BimatrixGame::zero(2), l1, PenaltySpec::zero(2.0).unwrap());
        let (x, _) = approx_best_response_penalty(&g, Player::Row, &[0.5, 0.5], 0.5).unwrap();
        // λ = √2 for L1 at n = 2, p = 2
        let l = l_for_penalty_br(libm::sqrt(2.0), 2.0, 0.5).unwrap();
        let nearest = libm::round(0.33 * l as f64) / l as f64;
        assert!((x.probs()[0] - nearest).abs() < 1e-12);
    }

    #[test]
    fn zero_game_first_profile() {
        let g = zero(BimatrixGame::zero(3));
        let config = SearchConfig { k_override: Some(2), ..SearchConfig::default() };
        match qptas(&g, 0.25, &config).unwrap() {
            LipschitzVerdict::Equilibrium(r) => {
                assert_eq!(r.profile[0].probs(), &[1.0, 0.0, 0.0]);
                assert_eq!(r.profile[1].probs(), &[1.0, 0.0, 0.0]);
                assert_eq!(r.method, "qptas");
            }
            v => panic!("{v:?}"),
        }
    }
}
