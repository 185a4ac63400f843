//! Game representations, strategies, penalties and utility/regret evaluation.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Matrix, Result};
use crate::math::{dot, pow};

/// Tolerance on probability sums and on tiny negative entries.
pub const PROB_TOL: f64 = 1e-12;

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    /// Validates that every entry is finite and `>= 0` and that the entries sum to one within
    /// [`PROB_TOL`]. Nothing is renormalized.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(MixedStrategy(probs))
    }

    /// Explicit renormalization: entries in `[-PROB_TOL, 0)` are clamped to zero, then the
    /// vector is divided by its sum. Larger negative entries are still an error.
    pub fn normalized(mut probs: Vec<f64>) -> Result<Self> {
        for (index, value) in probs.iter_mut().enumerate() {
            if !value.is_finite() || *value < -PROB_TOL {
                return Err(Error::NegativeProbability { index, value: *value });
            }
            if *value < 0.0 {
                *value = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if sum <= 0.0 {
            return Err(Error::NotNormalized { sum });
        }
        for value in probs.iter_mut() {
            *value /= sum;
        }
        MixedStrategy::new(probs)
    }

    /// The pure strategy `e_index`.
    pub fn pure(n: usize, index: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        MixedStrategy(probs)
    }

    /// The fully mixed strategy `(1/n, …, 1/n)`.
    pub fn uniform(n: usize) -> Self {
        MixedStrategy(vec![1.0 / n as f64; n])
    }

    /// `weight·self + (1 − weight)·other`.
    pub fn mix(&self, weight: f64, other: &MixedStrategy) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidParameter { name: "weight", value: weight });
        }
        let probs = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| weight * a + (1.0 - weight) * b)
            .collect();
        MixedStrategy::new(probs)
    }

    /// Probabilities as a slice.
    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    /// Consumes the strategy and returns the probability vector.
    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Number of pure strategies.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false for a validated strategy.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices played with probability above [`PROB_TOL`].
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, p)| **p > PROB_TOL).map(|(i, _)| i)
    }
}

impl AsRef<[f64]> for MixedStrategy {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The convex hull of `n` vertices in `d`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexStrategySpace {
    vertices: Vec<Vec<f64>>,
    dim: usize,
}

impl ConvexStrategySpace {
    /// Builds a space; all vertices must share one dimension.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vertices.first().ok_or(Error::Empty)?.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::RaggedVertices { player: 0 });
        }
        Ok(ConvexStrategySpace { vertices, dim })
    }

    /// The standard simplex: the unit vectors of `R^n`.
    pub fn simplex(n: usize) -> Self {
        let vertices = (0..n).map(|i| MixedStrategy::pure(n, i).into_vec()).collect();
        ConvexStrategySpace { vertices, dim: n }
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex list.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// The point `Σ_j weights_j · v_j`.
    pub fn point(&self, weights: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.point_into(weights, &mut out);
        out
    }

    pub(crate) fn point_into(&self, weights: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (w, v) in weights.iter().zip(&self.vertices) {
            if *w != 0.0 {
                for (o, c) in out.iter_mut().zip(v) {
                    *o += w * c;
                }
            }
        }
    }
}

/// An `n × n` bimatrix game with payoffs in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    n: usize,
    row: Vec<f64>,
    col: Vec<f64>,
}

impl BimatrixGame {
    /// Validates squareness, equal sizes and the `[0, 1]` payoff range.
    pub fn new(row: Vec<Vec<f64>>, col: Vec<Vec<f64>>) -> Result<Self> {
        let n = row.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        check_dim(n, col.len())?;
        let flat_row = flatten(Matrix::Row, row, n)?;
        let flat_col = flatten(Matrix::Col, col, n)?;
        Ok(BimatrixGame { n, row: flat_row, col: flat_col })
    }

    /// Builds a game from row-major flat arrays of length `n²`.
    pub fn from_flat(n: usize, row: Vec<f64>, col: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        check_dim(n * n, row.len())?;
        check_dim(n * n, col.len())?;
        check_range(Matrix::Row, &row, n)?;
        check_range(Matrix::Col, &col, n)?;
        Ok(BimatrixGame { n, row, col })
    }

    /// The all-zero game.
    pub fn zero(n: usize) -> Self {
        BimatrixGame { n, row: vec![0.0; n * n], col: vec![0.0; n * n] }
    }

    /// Number of pure strategies per player.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `R[i][j]`.
    pub fn row_payoff(&self, i: usize, j: usize) -> f64 {
        self.row[i * self.n + j]
    }

    /// `C[i][j]`.
    pub fn col_payoff(&self, i: usize, j: usize) -> f64 {
        self.col[i * self.n + j]
    }

    /// Row-major `R`.
    pub fn row_matrix(&self) -> &[f64] {
        &self.row
    }

    /// Row-major `C`.
    pub fn col_matrix(&self) -> &[f64] {
        &self.col
    }

    /// The vector `R·y` of row pure-strategy payoffs.
    pub fn row_payoffs(&self, y: &[f64]) -> Vec<f64> {
        self.row.chunks(self.n).map(|r| dot(r, y)).collect()
    }

    /// The vector `Cᵀ·x` of column pure-strategy payoffs.
    pub fn col_payoffs(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (xi, r) in x.iter().zip(self.col.chunks(self.n)) {
            if *xi != 0.0 {
                for (o, c) in out.iter_mut().zip(r) {
                    *o += xi * c;
                }
            }
        }
        out
    }

    /// Pure-strategy payoffs of `player` against the opponent strategy.
    pub fn payoffs(&self, player: Player, opponent: &[f64]) -> Vec<f64> {
        match player {
            Player::Row => self.row_payoffs(opponent),
            Player::Col => self.col_payoffs(opponent),
        }
    }

    /// `xᵀRy` or `xᵀCy`.
    pub fn bilinear(&self, player: Player, x: &[f64], y: &[f64]) -> f64 {
        match player {
            Player::Row => dot(x, &self.row_payoffs(y)),
            Player::Col => dot(y, &self.col_payoffs(x)),
        }
    }
}

fn flatten(matrix: Matrix, rows: Vec<Vec<f64>>, n: usize) -> Result<Vec<f64>> {
    let mut flat = Vec::with_capacity(n * n);
    for (r, values) in rows.into_iter().enumerate() {
        if values.len() != n {
            return Err(Error::NotSquare { matrix, row: r, len: values.len() });
        }
        flat.extend(values);
    }
    check_range(matrix, &flat, n)?;
    Ok(flat)
}

fn check_range(matrix: Matrix, flat: &[f64], n: usize) -> Result<()> {
    for (i, &value) in flat.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::PayoffOutOfRange { matrix, row: i / n, col: i % n, value });
        }
    }
    Ok(())
}

/// One of the two players of a bimatrix-based game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    /// The row player (strategy `x`).
    Row,
    /// The column player (strategy `y`).
    Col,
}

impl Player {
    /// The other player.
    pub fn opponent(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }

    /// 0 for row, 1 for column.
    pub fn index(self) -> usize {
        match self {
            Player::Row => 0,
            Player::Col => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Row => "row",
            Player::Col => "col",
        })
    }
}

/// Distance used by a biased player's penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// `‖x − p‖₁`.
    L1,
    /// `‖x − p‖₂²`.
    L2Sq,
    /// `‖x − p‖_∞`.
    Linf,
    /// `xᵀx`; the base strategy is taken to be the zero vector.
    Inner,
}

impl NormKind {
    /// Tag used in documents and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2Sq => "l2sq",
            NormKind::Linf => "linf",
            NormKind::Inner => "inner",
        }
    }

    /// Inverse of [`NormKind::tag`].
    pub fn from_tag(tag: &str) -> Option<NormKind> {
        match tag {
            "l1" => Some(NormKind::L1),
            "l2sq" => Some(NormKind::L2Sq),
            "linf" => Some(NormKind::Linf),
            "inner" => Some(NormKind::Inner),
            _ => None,
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Penalty `b(x, base)` for the chosen norm. `base` is ignored for [`NormKind::Inner`].
pub fn penalty_value(x: &[f64], base: &[f64], norm: NormKind) -> Result<f64> {
    if norm != NormKind::Inner {
        check_dim(x.len(), base.len())?;
    }
    let diffs = x.iter().zip(base).map(|(a, b)| a - b);
    Ok(match norm {
        NormKind::L1 => diffs.map(f64::abs).sum(),
        NormKind::L2Sq => diffs.map(|v| v * v).sum(),
        NormKind::Linf => diffs.map(f64::abs).fold(0.0, f64::max),
        NormKind::Inner => dot(x, x),
    })
}

/// A two-player distance-biased game.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceBiasedGame {
    game: BimatrixGame,
    base_row: MixedStrategy,
    base_col: MixedStrategy,
    norm_row: NormKind,
    norm_col: NormKind,
    d_row: f64,
    d_col: f64,
    zeros: Vec<f64>,
}

impl DistanceBiasedGame {
    /// Checks dimensions and that both weights are finite and non-negative.
    pub fn new(
        game: BimatrixGame,
        base_row: MixedStrategy,
        base_col: MixedStrategy,
        norm_row: NormKind,
        norm_col: NormKind,
        d_row: f64,
        d_col: f64,
    ) -> Result<Self> {
        let n = game.n();
        check_dim(n, base_row.len())?;
        check_dim(n, base_col.len())?;
        for (name, value) in [("d_row", d_row), ("d_col", d_col)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(DistanceBiasedGame {
            game,
            base_row,
            base_col,
            norm_row,
            norm_col,
            d_row,
            d_col,
            zeros: vec![0.0; n],
        })
    }

    /// The underlying bimatrix game.
    pub fn game(&self) -> &BimatrixGame {
        &self.game
    }

    /// Number of pure strategies per player.
    pub fn n(&self) -> usize {
        self.game.n()
    }

    /// Declared base strategy (`p` or `q`), even when the norm ignores it.
    pub fn base(&self, player: Player) -> &MixedStrategy {
        match player {
            Player::Row => &self.base_row,
            Player::Col => &self.base_col,
        }
    }

    /// The base actually used by the penalty: the zero vector for [`NormKind::Inner`].
    pub fn effective_base(&self, player: Player) -> &[f64] {
        if self.norm(player) == NormKind::Inner {
            &self.zeros
        } else {
            self.base(player).probs()
        }
    }

    /// Norm of `player`'s penalty.
    pub fn norm(&self, player: Player) -> NormKind {
        match player {
            Player::Row => self.norm_row,
            Player::Col => self.norm_col,
        }
    }

    /// Penalty weight `d_r` or `d_c`.
    pub fn weight(&self, player: Player) -> f64 {
        match player {
            Player::Row => self.d_row,
            Player::Col => self.d_col,
        }
    }
}

/// `T_r(x, y) = xᵀRy − d_r·b_r(x, p)` or the column analogue.
pub fn utility_biased(g: &DistanceBiasedGame, x: &[f64], y: &[f64], player: Player) -> Result<f64> {
    let n = g.n();
    check_dim(n, x.len())?;
    check_dim(n, y.len())?;
    let own = match player {
        Player::Row => x,
        Player::Col => y,
    };
    let penalty = penalty_value(own, g.effective_base(player), g.norm(player))?;
    Ok(g.game.bilinear(player, x, y) - g.weight(player) * penalty)
}

/// Penalty evaluator: maps a probability vector to a real.
pub type PenaltyFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A black-box penalty together with its declared Lipschitz data.
#[derive(Clone)]
pub struct PenaltySpec {
    evaluator: PenaltyFn,
    lambda: f64,
    norm_exponent: f64,
    description: String,
}

impl PenaltySpec {
    /// `evaluator` must be deterministic and `lambda`-Lipschitz in the L_p norm with
    /// `p = norm_exponent ≥ 2`.
    pub fn new(
        evaluator: PenaltyFn,
        lambda: f64,
        norm_exponent: f64,
        description: impl Into<String>,
    ) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter { name: "lambda", value: lambda });
        }
        if !(norm_exponent.is_finite() && norm_exponent >= 2.0) {
            return Err(Error::InvalidParameter { name: "p", value: norm_exponent });
        }
        Ok(PenaltySpec { evaluator, lambda, norm_exponent, description: description.into() })
    }

    /// The zero penalty. Any positive λ is valid; a tiny one keeps sample sizes minimal.
    pub fn zero(norm_exponent: f64) -> Result<Self> {
        PenaltySpec::new(Arc::new(|_: &[f64]| 0.0), 1e-9, norm_exponent, "zero")
    }

    /// `d · b(x, base)` for one of the four biased penalties, with a valid Lipschitz constant
    /// in the L_p norm on the simplex:
    /// `d·n^(1−1/p)` (L1), `4d` (L2²), `d` (L∞), `2d` (inner product).
    pub fn from_norm(norm: NormKind, base: Vec<f64>, d: f64, norm_exponent: f64) -> Result<Self> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::InvalidParameter { name: "d", value: d });
        }
        let n = base.len() as f64;
        let lambda = match norm {
            NormKind::L1 => d * pow(n, 1.0 - 1.0 / norm_exponent),
            NormKind::L2Sq => 4.0 * d,
            NormKind::Linf => d,
            NormKind::Inner => 2.0 * d,
        }
        .max(1e-9);
        let evaluator: PenaltyFn = Arc::new(move |x: &[f64]| {
            d * penalty_value(x, &base, norm).unwrap_or(f64::NAN)
        });
        PenaltySpec::new(evaluator, lambda, norm_exponent, norm.tag())
    }

    /// Evaluates the penalty.
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    /// Declared Lipschitz constant λ.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Declared norm exponent p.
    pub fn norm_exponent(&self) -> f64 {
        self.norm_exponent
    }

    /// Free-form description.
    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for PenaltySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PenaltySpec")
            .field("lambda", &self.lambda)
            .field("p", &self.norm_exponent)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

/// A bimatrix game with a black-box penalty for each player.
#[derive(Debug, Clone)]
pub struct PenaltyGame {
    game: BimatrixGame,
    penalty_row: PenaltySpec,
    penalty_col: PenaltySpec,
}

impl PenaltyGame {
    /// Bundles a game with its two penalties.
    pub fn new(game: BimatrixGame, penalty_row: PenaltySpec, penalty_col: PenaltySpec) -> Self {
        PenaltyGame { game, penalty_row, penalty_col }
    }

    /// Poses a distance-biased game as a penalty game with L_p exponent `norm_exponent`.
    pub fn from_biased(g: &DistanceBiasedGame, norm_exponent: f64) -> Result<Self> {
        let spec = |player| {
            PenaltySpec::from_norm(
                g.norm(player),
                g.effective_base(player).to_vec(),
                g.weight(player),
                norm_exponent,
            )
        };
        Ok(PenaltyGame::new(g.game().clone(), spec(Player::Row)?, spec(Player::Col)?))
    }

    /// The underlying bimatrix game.
    pub fn game(&self) -> &BimatrixGame {
        &self.game
    }

    /// Penalty of `player`.
    pub fn penalty(&self, player: Player) -> &PenaltySpec {
        match player {
            Player::Row => &self.penalty_row,
            Player::Col => &self.penalty_col,
        }
    }
}

/// `T_r(x, y) = xᵀRy − f_r(x)` or the column analogue.
pub fn utility_penalty(g: &PenaltyGame, x: &[f64], y: &[f64], player: Player) -> Result<f64> {
    let n = g.game.n();
    check_dim(n, x.len())?;
    check_dim(n, y.len())?;
    let own = match player {
        Player::Row => x,
        Player::Col => y,
    };
    Ok(g.game.bilinear(player, x, y) - g.penalty(player).eval(own))
}

/// Utility of one player: receives every player's point (in their own space) and returns a real.
pub type Utility = Arc<dyn Fn(&[&[f64]]) -> f64 + Send + Sync>;

/// An M-player game over convex strategy spaces with Lipschitz utilities.
#[derive(Clone)]
pub struct LipschitzGame {
    spaces: Vec<ConvexStrategySpace>,
    utilities: Vec<Utility>,
    lambda: f64,
    norm_exponent: f64,
    gamma: f64,
}

impl LipschitzGame {
    /// Validates the Lipschitz data and that `gamma ≥ ‖v‖_p` for every vertex.
    pub fn new(
        spaces: Vec<ConvexStrategySpace>,
        utilities: Vec<Utility>,
        lambda: f64,
        norm_exponent: f64,
        gamma: f64,
    ) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::Empty);
        }
        check_dim(spaces.len(), utilities.len())?;
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter { name: "lambda", value: lambda });
        }
        if !(norm_exponent.is_finite() && norm_exponent >= 2.0) {
            return Err(Error::InvalidParameter { name: "p", value: norm_exponent });
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter { name: "gamma", value: gamma });
        }
        for (player, space) in spaces.iter().enumerate() {
            for (vertex, v) in space.vertices().iter().enumerate() {
                let norm = lp_norm(v, norm_exponent);
                if norm > gamma * (1.0 + 1e-12) {
                    return Err(Error::GammaTooSmall { player, vertex, norm, gamma });
                }
            }
        }
        Ok(LipschitzGame { spaces, utilities, lambda, norm_exponent, gamma })
    }

    /// Embeds a bimatrix game: both players choose from the simplex and the row (column)
    /// utility is `xᵀRy − d_row·xᵀx` (`xᵀCy − d_col·yᵀy`). With both weights zero this is the
    /// plain bilinear game. λ is `½(2n)^(1−1/p) + 2·max(d)`, γ = 1.
    pub fn bilinear(game: &BimatrixGame, d_row: f64, d_col: f64, norm_exponent: f64) -> Result<Self> {
        for (name, value) in [("d_row", d_row), ("d_col", d_col)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        let n = game.n();
        let row_game = game.clone();
        let col_game = game.clone();
        let row: Utility = Arc::new(move |profile: &[&[f64]]| {
            let (x, y) = (profile[0], profile[1]);
            row_game.bilinear(Player::Row, x, y) - d_row * dot(x, x)
        });
        let col: Utility = Arc::new(move |profile: &[&[f64]]| {
            let (x, y) = (profile[0], profile[1]);
            col_game.bilinear(Player::Col, x, y) - d_col * dot(y, y)
        });
        let lambda = 0.5 * pow(2.0 * n as f64, 1.0 - 1.0 / norm_exponent) + 2.0 * d_row.max(d_col);
        LipschitzGame::new(
            vec![ConvexStrategySpace::simplex(n), ConvexStrategySpace::simplex(n)],
            vec![row, col],
            lambda,
            norm_exponent,
            1.0,
        )
    }

    /// Number of players M.
    pub fn players(&self) -> usize {
        self.spaces.len()
    }

    /// Strategy space of `player`.
    pub fn space(&self, player: usize) -> &ConvexStrategySpace {
        &self.spaces[player]
    }

    /// Declared λ.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Declared p.
    pub fn norm_exponent(&self) -> f64 {
        self.norm_exponent
    }

    /// Declared γ.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Utility of `player` when every player `i` plays the point `points[i]`.
    pub fn utility_at_points(&self, player: usize, points: &[&[f64]]) -> f64 {
        (self.utilities[player])(points)
    }

    /// Utility of `player` when every player plays the given weights over their vertices.
    pub fn utility(&self, player: usize, profile: &[MixedStrategy]) -> Result<f64> {
        check_dim(self.players(), profile.len())?;
        let points: Vec<Vec<f64>> = profile
            .iter()
            .zip(&self.spaces)
            .map(|(s, space)| {
                check_dim(space.vertex_count(), s.len())?;
                Ok(space.point(s.probs()))
            })
            .collect::<Result<_>>()?;
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        Ok(self.utility_at_points(player, &refs))
    }
}

impl fmt::Debug for LipschitzGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LipschitzGame")
            .field("spaces", &self.spaces)
            .field("lambda", &self.lambda)
            .field("p", &self.norm_exponent)
            .field("gamma", &self.gamma)
            .finish_non_exhaustive()
    }
}

pub(crate) fn lp_norm(v: &[f64], p: f64) -> f64 {
    pow(v.iter().map(|c| pow(c.abs(), p)).sum::<f64>(), 1.0 / p)
}

/// Anything that assigns each player a utility at a profile of mixed strategies.
pub trait Game {
    /// Number of players.
    fn players(&self) -> usize;
    /// Utility of `player` at `profile`.
    fn utility(&self, profile: &[MixedStrategy], player: usize) -> Result<f64>;
}

fn two_player(profile: &[MixedStrategy], player: usize) -> Result<(&[f64], &[f64], Player)> {
    check_dim(2, profile.len())?;
    let who = match player {
        0 => Player::Row,
        1 => Player::Col,
        _ => return Err(Error::DimensionMismatch { expected: 2, found: player + 1 }),
    };
    Ok((profile[0].probs(), profile[1].probs(), who))
}

impl Game for BimatrixGame {
    fn players(&self) -> usize {
        2
    }

    fn utility(&self, profile: &[MixedStrategy], player: usize) -> Result<f64> {
        let (x, y, who) = two_player(profile, player)?;
        check_dim(self.n, x.len())?;
        check_dim(self.n, y.len())?;
        Ok(self.bilinear(who, x, y))
    }
}

impl Game for DistanceBiasedGame {
    fn players(&self) -> usize {
        2
    }

    fn utility(&self, profile: &[MixedStrategy], player: usize) -> Result<f64> {
        let (x, y, who) = two_player(profile, player)?;
        utility_biased(self, x, y, who)
    }
}

impl Game for PenaltyGame {
    fn players(&self) -> usize {
        2
    }

    fn utility(&self, profile: &[MixedStrategy], player: usize) -> Result<f64> {
        let (x, y, who) = two_player(profile, player)?;
        utility_penalty(self, x, y, who)
    }
}

impl Game for LipschitzGame {
    fn players(&self) -> usize {
        self.spaces.len()
    }

    fn utility(&self, profile: &[MixedStrategy], player: usize) -> Result<f64> {
        if player >= self.players() {
            return Err(Error::DimensionMismatch { expected: self.players(), found: player + 1 });
        }
        LipschitzGame::utility(self, player, profile)
    }
}

/// A strategy profile with its regrets and certified guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    /// One strategy per player.
    pub profile: Vec<MixedStrategy>,
    /// Per-player regret, clamped at zero.
    pub regrets: Vec<f64>,
    /// Certified α: the profile is an α-equilibrium.
    pub guarantee: f64,
    /// Which solver produced the profile.
    pub method: String,
    /// Wall-clock time; zero unless the caller measured it.
    pub runtime_ms: f64,
    /// Mixing weight δ, for the base algorithm.
    pub delta: Option<f64>,
    /// Worst-case bound proved for the branch taken, for the base algorithm.
    pub analytic_bound: Option<f64>,
}

/// `max(0, best_response_value − utility(profile, player))`.
pub fn regret<F>(utility: F, profile: &[MixedStrategy], player: usize, best_response_value: f64) -> f64
where
    F: Fn(&[MixedStrategy], usize) -> f64,
{
    (best_response_value - utility(profile, player)).max(0.0)
}
