//! Benchmark harness: the base algorithm over a seeded ensemble, one CSV row per trial.

use std::io::Write;
use std::time::Instant;

use approxeq_core::approx::base_algorithm;
use approxeq_core::{NormKind, Player};

use crate::generate::Ensemble;
use crate::parallel::parallel_map;

/// Exact CSV header.
pub const HEADER: [&str; 12] = [
    "seed",
    "n",
    "norm_row",
    "norm_col",
    "d_row",
    "d_col",
    "delta",
    "row_regret",
    "col_regret",
    "guarantee",
    "analytic_bound",
    "runtime_ms",
];

/// One trial.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub norm_row: NormKind,
    pub norm_col: NormKind,
    pub d_row: f64,
    pub d_col: f64,
    /// Absent when the dominance path solved the game exactly.
    pub delta: Option<f64>,
    pub row_regret: f64,
    pub col_regret: f64,
    pub guarantee: f64,
    pub analytic_bound: f64,
    pub runtime_ms: f64,
}

/// Runs seeds `seed..seed + trials`. `runtime_ms` stays 0 unless `timing` is set.
pub fn run_benchmark(
    ensemble: &Ensemble,
    trials: u64,
    seed: u64,
    workers: usize,
    timing: bool,
) -> approxeq_core::Result<Vec<BenchRow>> {
    let seeds: Vec<u64> = (0..trials).map(|t| seed.wrapping_add(t)).collect();
    parallel_map(&seeds, workers, |&s| {
        let g = ensemble.instance(s)?;
        let clock = Instant::now();
        let r = base_algorithm(&g)?;
        let elapsed = clock.elapsed().as_secs_f64() * 1e3;
        Ok(BenchRow {
            seed: s,
            n: g.n(),
            norm_row: g.norm(Player::Row),
            norm_col: g.norm(Player::Col),
            d_row: g.weight(Player::Row),
            d_col: g.weight(Player::Col),
            delta: r.delta,
            row_regret: r.regrets[0],
            col_regret: r.regrets[1],
            guarantee: r.guarantee,
            analytic_bound: r.analytic_bound.unwrap_or(0.0),
            runtime_ms: if timing { elapsed } else { 0.0 },
        })
    })
    .into_iter()
    .collect()
}

fn num(v: f64) -> String {
    v.to_string()
}

/// Writes the header, the trials, and the `summary_max` and `summary_mean` rows (regrets and
/// guarantee only).
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.seed.to_string(),
            r.n.to_string(),
            r.norm_row.tag().to_string(),
            r.norm_col.tag().to_string(),
            num(r.d_row),
            num(r.d_col),
            r.delta.map(num).unwrap_or_default(),
            num(r.row_regret),
            num(r.col_regret),
            num(r.guarantee),
            num(r.analytic_bound),
            num(r.runtime_ms),
        ])?;
    }
    if !rows.is_empty() {
        let stat = |f: fn(&BenchRow) -> f64| -> (f64, f64) {
            let max = rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            let mean = rows.iter().map(f).sum::<f64>() / rows.len() as f64;
            (max, mean)
        };
        let cols = [stat(|r| r.row_regret), stat(|r| r.col_regret), stat(|r| r.guarantee)];
        for (label, pick) in [("summary_max", 0), ("summary_mean", 1)] {
            let v: Vec<String> = cols.iter().map(|c| num(if pick == 0 { c.0 } else { c.1 })).collect();
            let mut rec = vec![label.to_string()];
            rec.extend(std::iter::repeat_n(String::new(), 6));
            rec.extend(v);
            rec.extend([String::new(), String::new()]);
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}
