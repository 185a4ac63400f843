//! Acceptance criteria. Every test writes one `PASS`/`FAIL` line to stdout whether or not
//! output capture is on.

use std::fmt::Write as _;
use std::io::Write as _;
use std::time::{Duration, Instant};

use approxeq::bench::{run_benchmark, write_csv, BenchRow};
use approxeq::document::serialize_result;
use approxeq::generate::{generate_random_game, Ensemble, Rng};
use approxeq::parallel::{parallel_map, run_search};
use approxeq_core::approx::{base_algorithm, exact_equilibrium_if_dominant};
use approxeq_core::biased::{
    best_response, best_response_linf, best_response_quadratic, linf_partition, quadratic_candidates,
    response_utility, scored_order, wsne_quality,
};
use approxeq_core::lipschitz::{lipschitz_search, SearchConfig};
use approxeq_core::oracle::{
    exhaustive_quadratic_br, grid_best_response, lattice_best_response, verify_epsilon_equilibrium,
};
use approxeq_core::penalty::qptas_search;
use approxeq_core::{
    BimatrixGame, ConvexStrategySpace, Error, LipschitzGame, LipschitzVerdict, MixedStrategy, NormKind,
    PenaltyGame, PenaltySpec, Player,
};

const SEEDS: u64 = 1000;
const WORKERS: usize = 4;

fn line(id: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[{status}] {id}: {detail}").unwrap();
    out.flush().unwrap();
}

fn finish(id: &str, violations: &[String], elapsed: Duration, limit: Option<Duration>, detail: String) {
    let slow = limit.is_some_and(|l| elapsed > l);
    let pass = violations.is_empty() && !slow;
    let mut text = format!("{detail}; {:.2}s", elapsed.as_secs_f64());
    if let Some(l) = limit {
        let _ = write!(text, " (limit {}s)", l.as_secs());
    }
    if !violations.is_empty() {
        let _ = write!(text, "; {} violations, first: {}", violations.len(), violations[0]);
    }
    line(id, pass, &text);
    assert!(pass, "{id}: {text}");
}

fn csv(rows: &[BenchRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

/// Base algorithm over the norm's ensemble; returns the rows and the CSV transcript.
fn ensemble_run(norm: NormKind, workers: usize) -> (Vec<BenchRow>, String) {
    let rows = run_benchmark(&Ensemble::new(norm), SEEDS, 0, workers, false).unwrap();
    let text = csv(&rows);
    (rows, text)
}

fn bound_check(rows: &[BenchRow], bound: impl Fn(&BenchRow) -> f64) -> (Vec<String>, f64) {
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for r in rows {
        worst = worst.max(r.guarantee);
        let b = bound(r);
        if r.guarantee > b + 1e-9 {
            violations.push(format!("seed {} guarantee {} > {}", r.seed, r.guarantee, b));
        }
        if let Some(delta) = r.delta {
            if r.row_regret > delta + 1e-9 {
                violations.push(format!("seed {} row regret {} > δ {}", r.seed, r.row_regret, delta));
            }
        }
        if !(2..=25).contains(&r.n) {
            violations.push(format!("seed {} n = {}", r.seed, r.n));
        }
    }
    (violations, worst)
}

#[test]
fn c1_l1_two_thirds() {
    let t = Instant::now();
    let (rows, _) = ensemble_run(NormKind::L1, WORKERS);
    let (v, worst) = bound_check(&rows, |_| 2.0 / 3.0);
    let all_small = rows.iter().all(|r| r.d_row > 0.0 && r.d_row < 0.5 && r.d_col > 0.0 && r.d_col < 0.5);
    let v = if all_small { v } else { vec!["d outside (0, 1/2)".into()] };
    finish("C1 L1 bound", &v, t.elapsed(), Some(Duration::from_secs(10)), format!("1000 games, max guarantee {worst:.6} <= 2/3"));
}

#[test]
fn c2_l2sq_five_sevenths() {
    let t = Instant::now();
    let (rows, _) = ensemble_run(NormKind::L2Sq, WORKERS);
    let (mut v, worst) = bound_check(&rows, |_| 5.0 / 7.0);
    let high_q = rows.iter().filter(|r| r.delta == Some(2.0 / 3.0)).count();
    let low_q = rows.iter().filter(|r| r.delta == Some(5.0 / 7.0)).count();
    if high_q == 0 || low_q == 0 {
        v.push(format!("q branches not both exercised ({low_q} low, {high_q} high)"));
    }
    for r in &rows {
        if r.d_row != 1.0 || r.d_col != 1.0 {
            v.push(format!("seed {} has d != 1", r.seed));
        }
    }
    finish(
        "C2 L2sq bound",
        &v,
        t.elapsed(),
        Some(Duration::from_secs(30)),
        format!("1000 games ({low_q} with max q <= 1/2, {high_q} planted), max guarantee {worst:.6} <= 5/7, row regret <= delta"),
    );
}

#[test]
fn c3_linf_two_thirds() {
    let t = Instant::now();
    let (rows, _) = ensemble_run(NormKind::Linf, WORKERS);
    let (v, worst) = bound_check(&rows, |_| 2.0 / 3.0);
    finish("C3 Linf bound", &v, t.elapsed(), Some(Duration::from_secs(10)), format!("1000 games, max guarantee {worst:.6} <= 2/3"));
}

#[test]
fn c4_inner_bounds() {
    let t = Instant::now();
    let (rows, _) = ensemble_run(NormKind::Inner, WORKERS);
    let bound = |r: &BenchRow| if r.d_col > 0.5 { 13.0 / 21.0 } else { 3.0 / 5.0 };
    let (v, _) = bound_check(&rows, bound);
    let hi = rows.iter().filter(|r| r.d_col > 0.5).map(|r| r.guarantee).fold(0.0, f64::max);
    let lo = rows.iter().filter(|r| r.d_col <= 0.5).map(|r| r.guarantee).fold(0.0, f64::max);
    finish(
        "C4 inner bound",
        &v,
        t.elapsed(),
        Some(Duration::from_secs(10)),
        format!("1000 games, max guarantee {hi:.6} <= 13/21 (d_c > 1/2), {lo:.6} <= 3/5 (d_c <= 1/2)"),
    );
}

struct Instance {
    payoffs: Vec<f64>,
    base: Vec<f64>,
    d: f64,
}

/// Payoffs uniform on `[0,1)`, base uniform on the simplex (zero for the inner product).
fn instance(rng: &mut Rng, norm: NormKind, n: usize, d: f64) -> Instance {
    let payoffs = (0..n).map(|_| rng.uniform()).collect();
    let base = rng.simplex(n);
    let base = if norm == NormKind::Inner { vec![0.0; n] } else { base };
    Instance { payoffs, base, d }
}

fn salt(norm: NormKind) -> u64 {
    match norm {
        NormKind::L1 => 0x5A17_0001,
        NormKind::L2Sq => 0x5A17_0002,
        NormKind::Linf => 0x5A17_0003,
        NormKind::Inner => 0x5A17_0004,
    }
}

/// Oracle comparison for one seed: violations and a transcript record.
fn oracle_case(norm: NormKind, seed: u64) -> (Vec<String>, String) {
    let mut rng = Rng::new(seed ^ salt(norm));
    let n = 2 + rng.below(5) as usize;
    let d = 1.0 - rng.uniform();
    let Instance { payoffs, base, d } = instance(&mut rng, norm, n, d);
    let mut v = Vec::new();
    let u = |x: &[f64]| response_utility(norm, &payoffs, &base, d, x).unwrap();
    let br = best_response(norm, &payoffs, &base, d).unwrap();
    let u_br = u(br.probs());
    let (_, u_lat) = lattice_best_response(norm, &payoffs, &base, d, 300).unwrap();
    if u_br < u_lat - 1e-12 {
        v.push(format!("{norm} seed {seed}: BR {u_br} below lattice {u_lat}"));
    }
    let mut record = format!("{norm} {seed} {u_br:?} {u_lat:?}");
    if matches!(norm, NormKind::L2Sq | NormKind::Inner) {
        let u_ex = u(exhaustive_quadratic_br(&payoffs, &base, d).unwrap().probs());
        if (u_br - u_ex).abs() > 1e-9 {
            v.push(format!("{norm} seed {seed}: BR {u_br} vs support enumeration {u_ex}"));
        }
        let _ = write!(record, " {u_ex:?}");
    }
    if n <= 3 {
        let (_, u_grid) = grid_best_response(u, &ConvexStrategySpace::simplex(n), 300).unwrap();
        if u_br < u_grid - 1e-12 {
            v.push(format!("{norm} seed {seed}: BR {u_br} below grid {u_grid}"));
        }
        if (u_grid - u_lat).abs() > 1e-12 {
            v.push(format!("{norm} seed {seed}: grid {u_grid} vs lattice {u_lat}"));
        }
        let _ = write!(record, " {u_grid:?}");
    }
    (v, record)
}

const NORMS: [NormKind; 4] = [NormKind::L1, NormKind::L2Sq, NormKind::Linf, NormKind::Inner];

fn c5_run(workers: usize) -> (Vec<String>, String) {
    let cases: Vec<(NormKind, u64)> = NORMS.iter().flat_map(|&n| (0..SEEDS).map(move |s| (n, s))).collect();
    let results = parallel_map(&cases, workers, |&(norm, seed)| oracle_case(norm, seed));
    let mut violations = Vec::new();
    let mut transcript = String::new();
    for (v, r) in results {
        violations.extend(v);
        transcript.push_str(&r);
        transcript.push('\n');
    }
    (violations, transcript)
}

#[test]
fn c5_best_response_oracles() {
    let t = Instant::now();
    let (v, _) = c5_run(WORKERS);
    finish(
        "C5 oracle equivalence",
        &v,
        t.elapsed(),
        Some(Duration::from_secs(60)),
        "4 x 1000 instances, n <= 6: BR >= lattice (l = 300), = support enumeration (L2sq, inner), >= black-box grid (n <= 3)".into(),
    );
}

/// Runs one structural check per seed on `workers` threads.
fn check_run<F>(name: &str, workers: usize, check: F) -> (Vec<String>, String, usize)
where
    F: Fn(&mut Rng) -> (Option<String>, String, bool) + Sync,
{
    let seeds: Vec<u64> = (0..SEEDS).collect();
    let tag = name.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    let results = parallel_map(&seeds, workers, |&s| {
        let mut rng = Rng::new(s ^ tag);
        let (violation, record, applicable) = check(&mut rng);
        (violation.map(|v| format!("seed {s}: {v}")), record, applicable)
    });
    let mut violations = Vec::new();
    let mut transcript = String::new();
    let mut applicable = 0;
    for (v, r, a) in results {
        violations.extend(v);
        transcript.push_str(&r);
        transcript.push('\n');
        applicable += a as usize;
    }
    (violations, transcript, applicable)
}

fn small_n(rng: &mut Rng) -> usize {
    2 + rng.below(7) as usize
}

fn planted_base(rng: &mut Rng, n: usize) -> (Vec<f64>, usize) {
    let k = rng.below(n as u64) as usize;
    let mut q: Vec<f64> = rng.simplex(n).into_iter().map(|v| 0.5 * v).collect();
    q[k] += 0.5;
    (q, k)
}

fn prefix_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let n = small_n(rng);
    let d = 1.0 - rng.uniform();
    let Instance { payoffs, base, d } = instance(rng, NormKind::L2Sq, n, d);
    let x = best_response_quadratic(&payoffs, &base, d).unwrap();
    let order = scored_order(&payoffs, &base, d);
    let size = x.support().count();
    let prefix_ok = order[..size].iter().all(|s| x.probs()[s.index] > 0.0);
    let v = (!prefix_ok).then(|| format!("support {:?} is not an alpha prefix", x.support().collect::<Vec<_>>()));
    (v, format!("{:?}", x.probs()), true)
}

fn inner_instance(rng: &mut Rng) -> (Instance, MixedStrategy) {
    let n = small_n(rng);
    let d = 0.5 + 0.5 * rng.open_uniform();
    let inst = instance(rng, NormKind::Inner, n, d);
    let x = best_response_quadratic(&inst.payoffs, &inst.base, inst.d).unwrap();
    (inst, x)
}

fn pure_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let (inst, x) = inner_instance(rng);
    let size = x.support().count();
    let v = (size < 2).then(|| format!("pure best response {:?} at d = {}", x.probs(), inst.d));
    (v, format!("{:?}", x.probs()), true)
}

fn max_probability_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let (inst, x) = inner_instance(rng);
    let top = x.probs().iter().copied().fold(0.0, f64::max);
    let v = (top > 0.75 + 1e-12).then(|| format!("max probability {top} > 3/4 at d = {}, payoffs {:?}", inst.d, inst.payoffs));
    (v, format!("{:?}", x.probs()), true)
}

fn monotone_prefix_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let n = small_n(rng);
    let Instance { payoffs, base, .. } = instance(rng, NormKind::L2Sq, n, 1.0);
    let order = scored_order(&payoffs, &base, 1.0);
    let cands = quadratic_candidates(&payoffs, &base, 1.0).unwrap();
    let mut checked = false;
    let mut violation = None;
    for w in cands.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.support_size != a.support_size + 1 || order[a.support_size].alpha <= 1.0 {
            continue;
        }
        checked = true;
        if b.utility <= a.utility && violation.is_none() {
            violation = Some(format!("prefix {} -> {}: {} !< {}", a.support_size, b.support_size, a.utility, b.utility));
        }
    }
    let utilities: Vec<f64> = cands.iter().map(|c| c.utility).collect();
    (violation, format!("{utilities:?}"), checked)
}

fn pos_prob_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let n = small_n(rng);
    let payoffs: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let (q, k) = planted_base(rng, n);
    let y = best_response_quadratic(&payoffs, &q, 1.0).unwrap();
    let v = (y.probs()[k] <= 0.0).then(|| format!("q_{k} = {} but y_{k} = 0", q[k]));
    (v, format!("{:?}", y.probs()), true)
}

fn quadratic_term_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let n = small_n(rng);
    let payoffs: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let (q, k) = planted_base(rng, n);
    let y = best_response_quadratic(&payoffs, &q, 1.0).unwrap();
    let yy: f64 = y.probs().iter().map(|v| v * v).sum();
    let yq: f64 = y.probs().iter().zip(&q).map(|(a, b)| a * b).sum();
    let lhs = yy - 2.0 * yq;
    let rhs = 1.0 - 2.0 * q[k];
    let v = (lhs > rhs + 1e-9).then(|| format!("{lhs} > {rhs} with payoffs {payoffs:?}, q {q:?}, y {:?}", y.probs()));
    (v, format!("{lhs:?} {rhs:?}"), true)
}

fn linf_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let n = small_n(rng);
    let d = rng.open_uniform();
    let Instance { payoffs, base, d } = instance(rng, NormKind::Linf, n, d);
    let x = best_response_linf(&payoffs, &base, d).unwrap();
    let part = linf_partition(&payoffs, &base, d).unwrap();
    let mut v = None;
    if let Some(&i) = part.low.iter().find(|&&i| x.probs()[i] > 1e-12) {
        v = Some(format!("low strategy {i} played with {}", x.probs()[i]));
    }
    if !part.low.is_empty() {
        let dist = x.probs().iter().zip(&base).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if dist < part.p_max - 1e-12 && v.is_none() {
            v = Some(format!("distance {dist} < p_max {}", part.p_max));
        }
    }
    (v, format!("{:?}", x.probs()), !part.low.is_empty())
}

fn dominance_check(rng: &mut Rng) -> (Option<String>, String, bool) {
    let n = small_n(rng);
    let norm = if rng.below(2) == 0 { NormKind::L1 } else { NormKind::Linf };
    let threshold = match norm {
        NormKind::L1 => 0.5,
        _ => (n / 2).max(1) as f64,
    };
    let low = 0.5 * rng.uniform() * threshold;
    let high = threshold + rng.uniform();
    let (d_row, d_col) = match rng.below(3) {
        0 => (high, high),
        1 => (high, low),
        _ => (low, high),
    };
    let g = generate_random_game(n, norm, norm, d_row, d_col, rng.next_u64()).unwrap();
    match exact_equilibrium_if_dominant(&g).unwrap() {
        None => (Some("dominance not detected".into()), String::new(), true),
        Some((profile, (r, c))) => {
            let v = (r != 0.0 || c != 0.0).then(|| format!("{norm} regrets ({r}, {c})"));
            (v, format!("{:?} {:?}", profile[0].probs(), profile[1].probs()), true)
        }
    }
}

type Check = fn(&mut Rng) -> (Option<String>, String, bool);

const STRUCTURAL: [(&str, &str, Check); 8] = [
    ("prefix-support", "L2sq support is a prefix of the alpha order", prefix_check),
    ("no-pure-response", "inner product, d in (1/2, 1): support >= 2", pure_check),
    ("max-probability", "inner product, d in (1/2, 1): max probability <= 3/4", max_probability_check),
    ("monotone-prefixes", "d = 1: extending a feasible prefix by alpha > 1 raises utility", monotone_prefix_check),
    ("planted-played", "d = 1, q_k > 1/2: y*_k > 0", pos_prob_check),
    ("quadratic-term", "d = 1, q_k > 1/2: y*'y* - 2y*'q <= 1 - 2q_k", quadratic_term_check),
    ("linf-low-unplayed", "Linf: low strategies unplayed, distance >= p_max", linf_check),
    ("dominance", "dominant bases give zero regrets", dominance_check),
];

fn structural(name: &str) {
    let t = Instant::now();
    let (_, what, check) = STRUCTURAL.iter().find(|(n, _, _)| *n == name).unwrap();
    let (v, _, applicable) = check_run(name, WORKERS, check);
    finish(&format!("C6 {name}"), &v, t.elapsed(), None, format!("{what}; {applicable}/1000 seeds applicable"));
}

#[test]
fn c6_prefix_supports() {
    structural("prefix-support");
}

#[test]
fn c6_inner_no_pure_response() {
    structural("no-pure-response");
}

#[test]
fn c6_inner_max_probability() {
    structural("max-probability");
}

#[test]
fn c6_monotone_feasible_prefixes() {
    structural("monotone-prefixes");
}

#[test]
fn c6_planted_strategy_played() {
    structural("planted-played");
}

#[test]
fn c6_quadratic_term_bound() {
    structural("quadratic-term");
}

#[test]
fn c6_linf_low_strategies() {
    structural("linf-low-unplayed");
}

#[test]
fn c6_dominance_zero_regret() {
    structural("dominance");
}

const EPSILON: f64 = 0.3;
/// Desk-scale k for both searches; the selectors' k is far above any feasible budget.
const DESK_K: u64 = 12;

fn desk_game(seed: u64) -> BimatrixGame {
    let mut rng = Rng::new(seed ^ 0xC7C7_C7C7);
    let n = 2 + (seed % 2) as usize;
    let row = (0..n * n).map(|_| rng.uniform()).collect();
    let col = (0..n * n).map(|_| rng.uniform()).collect();
    BimatrixGame::from_flat(n, row, col).unwrap()
}

fn exact_regret_violation(game: &BimatrixGame, verdict: &LipschitzVerdict, label: &str) -> Option<String> {
    let LipschitzVerdict::Equilibrium(r) = verdict else {
        return Some(format!("{label}: no exact equilibrium reported"));
    };
    let (x, y) = (r.profile[0].probs(), r.profile[1].probs());
    let top = |v: Vec<f64>| v.into_iter().fold(f64::NEG_INFINITY, f64::max);
    let brs = [top(game.row_payoffs(y)), top(game.col_payoffs(x))];
    match verify_epsilon_equilibrium(game, &r.profile, 3.0 * EPSILON, &brs).unwrap() {
        approxeq_core::oracle::Verification::Holds => None,
        approxeq_core::oracle::Verification::Fails { player, gap } => {
            Some(format!("{label}: player {player} regret {gap} > 3 eps"))
        }
    }
}

fn c7_run(workers: usize) -> (Vec<String>, String, f64) {
    let config = SearchConfig { k_override: Some(DESK_K), ..SearchConfig::default() };
    let mut violations = Vec::new();
    let mut transcript = String::new();
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let game = desk_game(seed);
        let lg = LipschitzGame::bilinear(&game, 0.0, 0.0, 2.0).unwrap();
        let lv = run_search(&lipschitz_search(&lg, EPSILON, &config).unwrap(), workers).unwrap();
        let zero = || PenaltySpec::zero(2.0).unwrap();
        let pg = PenaltyGame::new(game.clone(), zero(), zero());
        let qv = run_search(&qptas_search(&pg, EPSILON, &config).unwrap(), workers).unwrap();
        for (label, v) in [("lipschitz", &lv), ("qptas", &qv)] {
            if let Some(msg) = exact_regret_violation(&game, v, &format!("game {seed} {label}")) {
                violations.push(msg);
            }
            if let LipschitzVerdict::Equilibrium(r) = v {
                let (x, y) = (r.profile[0].probs(), r.profile[1].probs());
                let rr = game.row_payoffs(y).into_iter().fold(0.0, f64::max) - game.bilinear(Player::Row, x, y);
                let cr = game.col_payoffs(x).into_iter().fold(0.0, f64::max) - game.bilinear(Player::Col, x, y);
                worst = worst.max(rr).max(cr);
            }
            transcript.push_str(&serialize_result(v));
        }
    }
    (violations, transcript, worst)
}

fn budget_guard() -> Vec<String> {
    let mut rng = Rng::new(10);
    let n = 10;
    let big = BimatrixGame::from_flat(
        n,
        (0..n * n).map(|_| rng.uniform()).collect(),
        (0..n * n).map(|_| rng.uniform()).collect(),
    )
    .unwrap();
    let mut v = Vec::new();
    let lg = LipschitzGame::bilinear(&big, 0.0, 0.0, 2.0).unwrap();
    match lipschitz_search(&lg, 0.01, &SearchConfig::default()) {
        Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => v.push(format!("lipschitz guard raised {e}")),
        Ok(_) => v.push("lipschitz search accepted n = 10, eps = 0.01".into()),
    }
    let zero = || PenaltySpec::zero(2.0).unwrap();
    let pg = PenaltyGame::new(big, zero(), zero());
    match qptas_search(&pg, 0.01, &SearchConfig::default()) {
        Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => v.push(format!("qptas guard raised {e}")),
        Ok(_) => v.push("qptas search accepted n = 10, eps = 0.01".into()),
    }
    v
}

#[test]
fn c7_desk_scale_searches() {
    let t = Instant::now();
    let (mut v, _, worst) = c7_run(WORKERS);
    v.extend(budget_guard());
    finish(
        "C7 Lipschitz/QPTAS soundness",
        &v,
        t.elapsed(),
        Some(Duration::from_secs(300)),
        format!("20 games (2x2, 3x3), eps = 0.3, k = {DESK_K}: max exact regret {worst:.4} <= 0.9, budget guard fires at n = 10, eps = 0.01"),
    );
}

#[test]
fn c8_wsne_on_dominance_path() {
    let t = Instant::now();
    let ensemble = Ensemble::new(NormKind::L1);
    let mut v = Vec::new();
    let mut checked = 0;
    for seed in 0..SEEDS {
        let p = ensemble.params(seed);
        // lift one weight into the dominance range: the row's on even seeds, the column's on odd
        let (d_row, d_col) = if seed % 2 == 0 { (p.d_row + 0.5, p.d_col) } else { (p.d_row, p.d_col + 0.5) };
        let g = generate_random_game(p.n, NormKind::L1, NormKind::L1, d_row, d_col, seed).unwrap();
        let r = base_algorithm(&g).unwrap();
        if r.method != "dominance" {
            v.push(format!("seed {seed}: dominance path not taken"));
            continue;
        }
        checked += 1;
        let q = wsne_quality(g.game(), r.profile[0].probs(), r.profile[1].probs()).unwrap();
        let bound = 2.0 * d_row.max(d_col);
        if q > bound + 1e-9 {
            v.push(format!("seed {seed}: wsne {q} > {bound}"));
        }
        if r.regrets != [0.0, 0.0] {
            v.push(format!("seed {seed}: regrets {:?}", r.regrets));
        }
    }
    finish("C8 WSNE bound", &v, t.elapsed(), None, format!("{checked} dominance-path equilibria, wsne <= 2 max(d)"));
}

fn transcripts(workers: usize) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (id, norm) in [("C1", NormKind::L1), ("C2", NormKind::L2Sq), ("C3", NormKind::Linf), ("C4", NormKind::Inner)] {
        out.push((id.to_string(), ensemble_run(norm, workers).1));
    }
    out.push(("C5".into(), c5_run(workers).1));
    for (name, _, check) in STRUCTURAL {
        out.push((format!("C6 {name}"), check_run(name, workers, check).1));
    }
    out.push(("C7".into(), c7_run(workers).1));
    out
}

#[test]
fn c9_determinism() {
    let t = Instant::now();
    let first = transcripts(1);
    let parallel = transcripts(4);
    let again = transcripts(1);
    let mut v = Vec::new();
    for ((id, a), ((_, b), (_, c))) in first.iter().zip(parallel.iter().zip(&again)) {
        if a != b {
            v.push(format!("{id} differs between 1 and 4 workers"));
        }
        if a != c {
            v.push(format!("{id} differs between runs"));
        }
    }
    finish("C9 determinism", &v, t.elapsed(), None, format!("{} transcripts byte-identical across workers {{1, 4}} and reruns", first.len()));
}
