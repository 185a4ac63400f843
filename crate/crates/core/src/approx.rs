//! The base algorithm for distance-biased games: best-respond to a starting point, best-respond
//! back, and mix the second response with the starting point.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::biased::{best_response, is_base_dominant};
use crate::error::Result;
use crate::game::{
    check_dim, utility_biased, ApproxResult, DistanceBiasedGame, MixedStrategy, NormKind, Player,
};

/// Mixing weight δ, keyed on the column player's penalty: 2/3 for L1 and L∞; for L2², 5/7 when
/// `max q ≤ 1/2` and 2/3 otherwise; for the inner product, 13/21 when `d_col > 1/2` and 3/5
/// otherwise.
pub fn choose_delta(g: &DistanceBiasedGame) -> f64 {
    match g.norm(Player::Col) {
        NormKind::L1 | NormKind::Linf => 2.0 / 3.0,
        NormKind::L2Sq => {
            if q_max(g) <= 0.5 {
                5.0 / 7.0
            } else {
                2.0 / 3.0
            }
        }
        NormKind::Inner => {
            if g.weight(Player::Col) > 0.5 {
                13.0 / 21.0
            } else {
                3.0 / 5.0
            }
        }
    }
}

fn q_max(g: &DistanceBiasedGame) -> f64 {
    g.base(Player::Col).probs().iter().copied().fold(0.0, f64::max)
}

/// Worst-case guarantee of the base algorithm with weight `delta`: `max(δ, (1−δ)·K)`, where
/// `K` bounds `1 + d_c·b_c(y*, q)` for the column player's penalty.
pub fn analytic_bound(g: &DistanceBiasedGame, delta: f64) -> f64 {
    let d = g.weight(Player::Col);
    let k = match g.norm(Player::Col) {
        NormKind::L1 => 1.0 + 2.0 * d,
        NormKind::Linf => 1.0 + d,
        NormKind::L2Sq => {
            if q_max(g) <= 0.5 {
                1.0 + 1.5 * d
            } else if d == 1.0 {
                2.0
            } else {
                1.0 + 2.0 * d
            }
        }
        NormKind::Inner => {
            if d > 0.5 {
                // no strategy gets more than 1/2 + 1/(4d) in a best response
                let m = 0.5 + 0.25 / d;
                1.0 + d * (m * m + (1.0 - m) * (1.0 - m))
            } else {
                1.0 + d
            }
        }
    };
    delta.max((1.0 - delta) * k)
}

/// Exact best response of `player` against the opponent strategy.
pub fn best_response_for(g: &DistanceBiasedGame, player: Player, opponent: &[f64]) -> Result<MixedStrategy> {
    check_dim(g.n(), opponent.len())?;
    let payoffs = g.game().payoffs(player, opponent);
    best_response(g.norm(player), &payoffs, g.effective_base(player), g.weight(player))
}

/// Row and column regret at `(x, y)`, measured against exact best responses and clamped at 0.
pub fn measure_regrets(g: &DistanceBiasedGame, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let row_br = best_response_for(g, Player::Row, y)?;
    let col_br = best_response_for(g, Player::Col, x)?;
    let row = utility_biased(g, row_br.probs(), y, Player::Row)? - utility_biased(g, x, y, Player::Row)?;
    let col = utility_biased(g, x, col_br.probs(), Player::Col)? - utility_biased(g, x, y, Player::Col)?;
    Ok((row.max(0.0), col.max(0.0)))
}

/// An exact equilibrium from dominant base strategies, with its measured regrets.
pub fn exact_equilibrium_if_dominant(
    g: &DistanceBiasedGame,
) -> Result<Option<(Vec<MixedStrategy>, (f64, f64))>> {
    let n = g.n();
    let row = is_base_dominant(g.norm(Player::Row), g.weight(Player::Row), n);
    let col = is_base_dominant(g.norm(Player::Col), g.weight(Player::Col), n);
    let (x, y) = match (row, col) {
        (false, false) => return Ok(None),
        (true, true) => (g.base(Player::Row).clone(), g.base(Player::Col).clone()),
        (true, false) => {
            let p = g.base(Player::Row).clone();
            let y = best_response_for(g, Player::Col, p.probs())?;
            (p, y)
        }
        (false, true) => {
            let q = g.base(Player::Col).clone();
            let x = best_response_for(g, Player::Row, q.probs())?;
            (x, q)
        }
    };
    let regrets = measure_regrets(g, x.probs(), y.probs())?;
    Ok(Some((vec![x, y], regrets)))
}

/// The base algorithm. Dominance cases are solved exactly; otherwise `y*` best-responds to the
/// start point (`p`, or the uniform strategy when the row penalty is the inner product), `x`
/// best-responds to `y*`, and the profile is `(δ·start + (1−δ)·x, y*)`.
pub fn base_algorithm(g: &DistanceBiasedGame) -> Result<ApproxResult> {
    if let Some((profile, (r, c))) = exact_equilibrium_if_dominant(g)? {
        return Ok(ApproxResult {
            profile,
            regrets: vec![r, c],
            guarantee: r.max(c),
            method: String::from("dominance"),
            runtime_ms: 0.0,
            delta: None,
            analytic_bound: Some(0.0),
        });
    }
    let start = match g.norm(Player::Row) {
        NormKind::Inner => MixedStrategy::uniform(g.n()),
        _ => g.base(Player::Row).clone(),
    };
    let y_star = best_response_for(g, Player::Col, start.probs())?;
    let x = best_response_for(g, Player::Row, y_star.probs())?;
    let delta = choose_delta(g);
    let x_star = start.mix(delta, &x)?;
    let (r, c) = measure_regrets(g, x_star.probs(), y_star.probs())?;
    Ok(ApproxResult {
        profile: vec![x_star, y_star],
        regrets: vec![r, c],
        guarantee: r.max(c),
        method: String::from("base"),
        runtime_ms: 0.0,
        delta: Some(delta),
        analytic_bound: Some(analytic_bound(g, delta)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::BimatrixGame;

    fn game(
        r: Vec<Vec<f64>>,
        c: Vec<Vec<f64>>,
        p: &[f64],
        q: &[f64],
        norm: NormKind,
        d: (f64, f64),
    ) -> DistanceBiasedGame {
        DistanceBiasedGame::new(
            BimatrixGame::new(r, c).unwrap(),
            MixedStrategy::new(p.to_vec()).unwrap(),
            MixedStrategy::new(q.to_vec()).unwrap(),
            norm,
            norm,
            d.0,
            d.1,
        )
        .unwrap()
    }

    #[test]
    fn zero_game_returns_bases() {
        let g = game(vec![vec![0.0; 3]; 3], vec![vec![0.0; 3]; 3], &[0.2, 0.3, 0.5], &[0.6, 0.1, 0.3], NormKind::L1, (0.2, 0.3));
        let res = base_algorithm(&g).unwrap();
        assert_eq!(res.profile[0].probs(), &[0.2, 0.3, 0.5]);
        assert_eq!(res.profile[1].probs(), &[0.6, 0.1, 0.3]);
        assert_eq!(res.regrets, vec![0.0, 0.0]);
    }

    #[test]
    fn delta_examples() {
        let m = vec![vec![0.5; 2]; 2];
        let g = game(m.clone(), m.clone(), &[0.5, 0.5], &[0.5, 0.5], NormKind::L1, (0.1, 0.1));
        assert_eq!(choose_delta(&g), 2.0 / 3.0);
        let g = game(m.clone(), m.clone(), &[0.5, 0.5], &[0.6, 0.4], NormKind::L2Sq, (1.0, 1.0));
        assert_eq!(choose_delta(&g), 2.0 / 3.0);
        let g = game(m.clone(), m.clone(), &[0.5, 0.5], &[0.5, 0.5], NormKind::L2Sq, (1.0, 1.0));
        assert_eq!(choose_delta(&g), 5.0 / 7.0);
        let g = game(m.clone(), m.clone(), &[0.5, 0.5], &[0.5, 0.5], NormKind::Inner, (1.0, 1.0));
        assert_eq!(choose_delta(&g), 13.0 / 21.0);
        assert!((analytic_bound(&g, 13.0 / 21.0) - 13.0 / 21.0).abs() < 1e-15);
        let g = game(m.clone(), m, &[0.5, 0.5], &[0.5, 0.5], NormKind::Inner, (0.5, 0.5));
        assert_eq!(choose_delta(&g), 3.0 / 5.0);
        assert!((analytic_bound(&g, 0.6) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn dominance_examples() {
        let r = vec![vec![0.9, 0.1], vec![0.3, 0.8]];
        let c = vec![vec![0.2, 0.7], vec![0.6, 0.4]];
        let (p, q) = ([0.3, 0.7], [0.8, 0.2]);
        let g = game(r.clone(), c.clone(), &p, &q, NormKind::L1, (0.6, 0.6));
        let (profile, regrets) = exact_equilibrium_if_dominant(&g).unwrap().unwrap();
        assert_eq!((profile[0].probs(), profile[1].probs()), (&p[..], &q[..]));
        assert_eq!(regrets, (0.0, 0.0));
        let g = game(r.clone(), c.clone(), &p, &q, NormKind::L1, (0.6, 0.1));
        let (profile, regrets) = exact_equilibrium_if_dominant(&g).unwrap().unwrap();
        assert_eq!(profile[0].probs(), &p);
        assert!(regrets.0 < 1e-9 && regrets.1 < 1e-9);
        let g = game(r, c, &p, &q, NormKind::Linf, (0.5, 0.5));
        assert!(exact_equilibrium_if_dominant(&g).unwrap().is_none());
    }
}
