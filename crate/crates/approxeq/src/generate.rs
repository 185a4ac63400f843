//! Seeded random games.
//!
//! Every stream is SplitMix64 (64-bit state, increment `0x9E3779B97F4A7C15`, output mixer
//! `(z ^ z>>30)·0xBF58476D1CE4E5B9`, `(z ^ z>>27)·0x94D049BB133111EB`, `z ^ z>>31`). Draws:
//!
//! * uniform on `[0, 1)`: `(x >> 11) · 2⁻⁵³`
//! * uniform on `(0, 1)`: `((x >> 11) + ½) · 2⁻⁵³`
//! * point of the simplex: `E_i = −ln U_i` with `U_i` on `(0, 1)`, divided by `Σ E_i`
//! * integer below `m`: high 64 bits of `x · m`
//!
//! A game with seed `s` draws `R` then `C` (row-major), then `p`, then `q`, from the stream
//! seeded with `s`.

use approxeq_core::{BimatrixGame, DistanceBiasedGame, MixedStrategy, NormKind};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Seed offset of the stream that draws ensemble parameters, kept apart from the game stream.
pub const PARAMETER_STREAM: u64 = 0xD1B5_4A32_D192_ED03;

/// Deterministic draws over SplitMix64.
#[derive(Debug, Clone)]
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1)`.
    pub fn open_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `{0, …, m−1}`.
    pub fn below(&mut self, m: u64) -> u64 {
        ((self.next_u64() as u128 * m as u128) >> 64) as u64
    }

    /// Uniform point of the simplex with `n` entries.
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..n).map(|_| -self.open_uniform().ln()).collect();
        let sum: f64 = e.iter().sum();
        e.into_iter().map(|v| v / sum).collect()
    }
}

fn strategy(probs: Vec<f64>) -> MixedStrategy {
    MixedStrategy::normalized(probs).expect("positive draws normalize")
}

fn draw(
    n: usize,
    norm_row: NormKind,
    norm_col: NormKind,
    d_row: f64,
    d_col: f64,
    seed: u64,
    plant: Option<usize>,
) -> approxeq_core::Result<DistanceBiasedGame> {
    if n == 0 {
        return Err(approxeq_core::Error::Empty);
    }
    let mut rng = Rng::new(seed);
    let row: Vec<f64> = (0..n * n).map(|_| rng.uniform()).collect();
    let col: Vec<f64> = (0..n * n).map(|_| rng.uniform()).collect();
    let p = rng.simplex(n);
    let mut q = rng.simplex(n);
    if let Some(k) = plant {
        if k >= n {
            return Err(approxeq_core::Error::DimensionMismatch { expected: n, found: k + 1 });
        }
        for v in q.iter_mut() {
            *v *= 0.5;
        }
        q[k] += 0.5;
    }
    DistanceBiasedGame::new(
        BimatrixGame::from_flat(n, row, col)?,
        strategy(p),
        strategy(q),
        norm_row,
        norm_col,
        d_row,
        d_col,
    )
}

/// Payoffs i.i.d. uniform on `[0, 1)`, base strategies uniform on the simplex.
pub fn generate_random_game(
    n: usize,
    norm_row: NormKind,
    norm_col: NormKind,
    d_row: f64,
    d_col: f64,
    seed: u64,
) -> approxeq_core::Result<DistanceBiasedGame> {
    draw(n, norm_row, norm_col, d_row, d_col, seed, None)
}

/// As [`generate_random_game`] with the column base replaced by `½q + ½e_plant`, so that
/// `max q > 1/2`.
pub fn generate_planted_game(
    n: usize,
    norm_row: NormKind,
    norm_col: NormKind,
    d_row: f64,
    d_col: f64,
    seed: u64,
    plant: usize,
) -> approxeq_core::Result<DistanceBiasedGame> {
    draw(n, norm_row, norm_col, d_row, d_col, seed, Some(plant))
}

/// The benchmark ensemble of one norm. Unset fields are drawn per seed from the parameter
/// stream (`seed ^ PARAMETER_STREAM`) in the order n, d_row, d_col, planted index:
///
/// * n uniform on `{2, …, 25}`
/// * L1: `d_row`, `d_col` uniform on `(0, ½)`
/// * L∞: uniform on `(0, 1)`
/// * L2²: both 1; odd seeds plant `max q > ½` at a uniform index
/// * inner product: `d_row` uniform on `(0, 1)`; `d_col` on `(½, 1)` for even seeds and on
///   `(0, ½)` for odd seeds
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ensemble {
    pub norm: NormKind,
    pub n: Option<usize>,
    pub d_row: Option<f64>,
    pub d_col: Option<f64>,
}

/// Parameters of one ensemble member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceParams {
    pub n: usize,
    pub d_row: f64,
    pub d_col: f64,
    pub plant: Option<usize>,
}

impl Ensemble {
    pub fn new(norm: NormKind) -> Self {
        Ensemble { norm, n: None, d_row: None, d_col: None }
    }

    pub fn params(&self, seed: u64) -> InstanceParams {
        let mut rng = Rng::new(seed ^ PARAMETER_STREAM);
        let drawn_n = 2 + rng.below(24) as usize;
        let n = self.n.unwrap_or(drawn_n);
        let odd = seed % 2 == 1;
        let (d_row, d_col) = match self.norm {
            NormKind::L1 => (0.5 * rng.open_uniform(), 0.5 * rng.open_uniform()),
            NormKind::Linf => (rng.open_uniform(), rng.open_uniform()),
            NormKind::L2Sq => (1.0, 1.0),
            NormKind::Inner => {
                let r = rng.open_uniform();
                let c = 0.5 * rng.open_uniform();
                (r, if odd { c } else { 0.5 + c })
            }
        };
        let plant_index = rng.below(n as u64) as usize;
        InstanceParams {
            n,
            d_row: self.d_row.unwrap_or(d_row),
            d_col: self.d_col.unwrap_or(d_col),
            plant: (self.norm == NormKind::L2Sq && odd).then_some(plant_index),
        }
    }

    pub fn instance(&self, seed: u64) -> approxeq_core::Result<DistanceBiasedGame> {
        let p = self.params(seed);
        draw(p.n, self.norm, self.norm, p.d_row, p.d_col, seed, p.plant)
    }
}
