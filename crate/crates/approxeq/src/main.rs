use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use approxeq::bench::{run_benchmark, write_csv};
use approxeq::document::{
    parse_game, parse_vector, render, serialize_game, BiasedDoc, GameDocument, GameModel, ResultDocument,
};
use approxeq::generate::{generate_planted_game, generate_random_game, Ensemble};
use approxeq::parallel::{grid_best_response_parallel, run_search};
use approxeq::DocError;
use approxeq_core::approx::{base_algorithm, best_response_for};
use approxeq_core::lipschitz::{lipschitz_search, ScanMode, SearchConfig};
use approxeq_core::oracle::{verify_epsilon_equilibrium, Verification};
use approxeq_core::penalty::{approx_best_response_penalty, qptas_search};
use approxeq_core::uniform::l_for_regret;
use approxeq_core::{
    utility_biased, utility_penalty, ConvexStrategySpace, Game, LipschitzVerdict, MixedStrategy, NormKind,
    PenaltyGame, Player,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "approxeq", version, about = "Approximate equilibria of biased, penalty and Lipschitz games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Base,
    Qptas,
    Lipschitz,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Row,
    Col,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    L1,
    L2sq,
    Linf,
    Inner,
}

impl From<Norm> for NormKind {
    fn from(n: Norm) -> Self {
        match n {
            Norm::L1 => NormKind::L1,
            Norm::L2sq => NormKind::L2Sq,
            Norm::Linf => NormKind::Linf,
            Norm::Inner => NormKind::Inner,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute an approximate equilibrium.
    Solve {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Target accuracy of the searches; ignored by `base`.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Search this k instead of the selector's.
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Result file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exponent of the number of players in the Lipschitz k selector.
        #[arg(long, default_value_t = 2)]
        m_exponent: u32,
        /// Accept whichever profile a worker finds first.
        #[arg(long)]
        any: bool,
        /// Largest admissible number of projected utility evaluations.
        #[arg(long, default_value_t = 1e9)]
        budget: f64,
        /// Record wall-clock time in the result.
        #[arg(long)]
        timing: bool,
        /// L_p exponent of the builtin penalties when a biased game is solved with `qptas`.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Best response of one player against a fixed opponent strategy.
    BestResponse {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        player: Side,
        /// Opponent strategy, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        against: String,
        /// Also report the l-uniform grid maximizer.
        #[arg(long)]
        oracle: bool,
        /// Grid resolution of the oracle.
        #[arg(long, default_value_t = 100)]
        l: u64,
        /// Accuracy of approximate best responses (penalty and Lipschitz games).
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Check a result file against an accuracy target.
    Verify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        epsilon: f64,
    },
    /// Write a seeded random biased game.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        norm: Norm,
        /// Column penalty; the row penalty's when absent.
        #[arg(long, value_enum)]
        norm_col: Option<Norm>,
        #[arg(long)]
        d_row: f64,
        #[arg(long)]
        d_col: f64,
        #[arg(long)]
        seed: u64,
        /// Move half of the column base onto this strategy.
        #[arg(long)]
        plant_q: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the base algorithm over a seeded ensemble and write CSV.
    Bench {
        #[arg(long, value_enum)]
        norm: Norm,
        /// Fixed size; drawn per seed from {2, …, 25} when absent.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        d_row: Option<f64>,
        #[arg(long)]
        d_col: Option<f64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        timing: bool,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|source| DocError::Io { path: path.into(), source }.into())
}

fn write(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| DocError::Io { path: p.into(), source }.into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<approxeq::document::ParsedGame> {
    parse_game(&read(path)?).with_context(|| format!("reading {}", path.display()))
}

fn side(s: Side) -> Player {
    match s {
        Side::Row => Player::Row,
        Side::Col => Player::Col,
    }
}

fn penalty_model(parsed: &approxeq::document::ParsedGame, p: f64) -> anyhow::Result<PenaltyGame> {
    Ok(match &parsed.model {
        GameModel::Penalty(g) => g.clone(),
        GameModel::Biased(g) => PenaltyGame::from_biased(g, p)?,
        GameModel::Lipschitz(_) => bail!("qptas needs a biased or penalty game"),
    })
}

#[allow(clippy::too_many_arguments)]
fn solve(
    game: &Path,
    method: Method,
    epsilon: f64,
    k: Option<u64>,
    workers: usize,
    out: Option<&Path>,
    m_exponent: u32,
    any: bool,
    budget: f64,
    timing: bool,
    p: f64,
) -> anyhow::Result<bool> {
    let parsed = load(game)?;
    let config = SearchConfig {
        k_override: k,
        m_exponent,
        budget,
        mode: if any { ScanMode::Any } else { ScanMode::First },
    };
    let clock = Instant::now();
    let (mut verdict, eps) = match method {
        Method::Base => match &parsed.model {
            GameModel::Biased(g) => (LipschitzVerdict::Equilibrium(base_algorithm(g)?), None),
            _ => bail!("the base algorithm needs a biased game"),
        },
        Method::Qptas => {
            let g = penalty_model(&parsed, p)?;
            let search = qptas_search(&g, epsilon, &config)?;
            let verdict = run_search(&search, workers)?;
            (verdict, Some(epsilon))
        }
        Method::Lipschitz => match &parsed.model {
            GameModel::Lipschitz(g) => (run_search(&lipschitz_search(g, epsilon, &config)?, workers)?, Some(epsilon)),
            _ => bail!("the lipschitz search needs a lipschitz game"),
        },
    };
    let elapsed = clock.elapsed().as_secs_f64() * 1e3;
    if let (LipschitzVerdict::Equilibrium(r), true) = (&mut verdict, timing) {
        r.runtime_ms = elapsed;
    }
    let mut doc = ResultDocument::from_verdict(&verdict);
    doc.epsilon = eps;
    write(out, &doc.render())?;
    Ok(matches!(verdict, LipschitzVerdict::Equilibrium(_)))
}

fn best_response(
    game: &Path,
    player: Player,
    against: &str,
    oracle: bool,
    l: u64,
    epsilon: f64,
    workers: usize,
) -> anyhow::Result<()> {
    let parsed = load(game)?;
    let opponent = MixedStrategy::new(parse_vector(against).context("--against")?).context("--against")?;
    let mut report = serde_json::Map::new();
    report.insert("player".into(), json!(player.to_string()));
    let grid = |value: &(dyn Fn(&[f64]) -> f64 + Sync), n: usize, l: u64| -> anyhow::Result<serde_json::Value> {
        let (counts, v) = grid_best_response_parallel(value, &ConvexStrategySpace::simplex(n), l, workers)?;
        Ok(json!({ "l": l, "strategy": counts.to_strategy()?.probs(), "value": v }))
    };
    match &parsed.model {
        GameModel::Biased(g) => {
            let br = best_response_for(g, player, opponent.probs())?;
            let value = profile_value(player, br.probs(), opponent.probs(), |x, y| {
                utility_biased(g, x, y, player)
            })?;
            report.insert("strategy".into(), json!(br.probs()));
            report.insert("value".into(), json!(value));
            if oracle {
                let f = |x: &[f64]| {
                    profile_value(player, x, opponent.probs(), |a, b| utility_biased(g, a, b, player))
                        .unwrap_or(f64::NEG_INFINITY)
                };
                report.insert("oracle".into(), grid(&f, g.n(), l)?);
            }
        }
        GameModel::Penalty(g) => {
            let (br, value) = approx_best_response_penalty(g, player, opponent.probs(), epsilon)?;
            report.insert("strategy".into(), json!(br.probs()));
            report.insert("value".into(), json!(value));
            if oracle {
                let f = |x: &[f64]| {
                    profile_value(player, x, opponent.probs(), |a, b| utility_penalty(g, a, b, player))
                        .unwrap_or(f64::NEG_INFINITY)
                };
                report.insert("oracle".into(), grid(&f, g.game().n(), l)?);
            }
        }
        GameModel::Lipschitz(g) => {
            let i = player.index();
            let space = g.space(i);
            let points: Vec<f64> = opponent.probs().to_vec();
            let other = g.space(1 - i).point(&points);
            let f = |x: &[f64]| {
                let profile: [&[f64]; 2] = if i == 0 { [x, &other] } else { [&other, x] };
                g.utility_at_points(i, &profile)
            };
            let l = if oracle { l } else { l_for_regret(g.lambda(), g.norm_exponent(), g.gamma(), epsilon)? };
            let (counts, value) = grid_best_response_parallel(f, space, l, workers)?;
            report.insert("weights".into(), json!(counts.to_strategy()?.probs()));
            report.insert("strategy".into(), json!(counts.to_point(space)?));
            report.insert("value".into(), json!(value));
            report.insert("l".into(), json!(l));
        }
    }
    write(None, &render(serde_json::Value::Object(report)))
}

fn profile_value<F>(player: Player, mine: &[f64], theirs: &[f64], f: F) -> approxeq_core::Result<f64>
where
    F: Fn(&[f64], &[f64]) -> approxeq_core::Result<f64>,
{
    match player {
        Player::Row => f(mine, theirs),
        Player::Col => f(theirs, mine),
    }
}

/// Best-response values against which a result's regrets are measured: exact for biased
/// games, the searches' own approximate oracles otherwise.
fn br_values(parsed: &approxeq::document::ParsedGame, profile: &[MixedStrategy], accuracy: f64) -> anyhow::Result<Vec<f64>> {
    let mut out = Vec::new();
    for player in [Player::Row, Player::Col] {
        let opp = profile[player.opponent().index()].probs();
        let v = match &parsed.model {
            GameModel::Biased(g) => {
                let br = best_response_for(g, player, opp)?;
                profile_value(player, br.probs(), opp, |x, y| utility_biased(g, x, y, player))?
            }
            GameModel::Penalty(g) => approx_best_response_penalty(g, player, opp, accuracy)?.1,
            GameModel::Lipschitz(g) => {
                let i = player.index();
                let l = l_for_regret(g.lambda(), g.norm_exponent(), g.gamma(), accuracy)?;
                let other = g.space(1 - i).point(opp);
                let f = |x: &[f64]| {
                    let pr: [&[f64]; 2] = if i == 0 { [x, &other] } else { [&other, x] };
                    g.utility_at_points(i, &pr)
                };
                approxeq_core::oracle::grid_best_response(f, g.space(i), l)?.1
            }
        };
        out.push(v);
    }
    Ok(out)
}

fn verify(game: &Path, profile: &Path, epsilon: f64) -> anyhow::Result<()> {
    let mut parsed = load(game)?;
    let result = ResultDocument::parse(&read(profile)?).with_context(|| format!("reading {}", profile.display()))?;
    let LipschitzVerdict::Equilibrium(r) = result.to_verdict()? else {
        bail!("{} holds no profile", profile.display());
    };
    if r.method == "qptas" {
        if let GameModel::Biased(g) = &parsed.model {
            parsed.model = GameModel::Penalty(PenaltyGame::from_biased(g, 2.0)?);
            parsed.doc = GameDocument::Penalty(approxeq::document::PenaltyDoc::from_biased(match &parsed.doc {
                GameDocument::Biased(d) => d,
                _ => unreachable!("biased model comes from a biased document"),
            })?);
        }
    }
    let accuracy = result.epsilon.or(r.delta).unwrap_or(epsilon);
    let brs = br_values(&parsed, &r.profile, accuracy)?;
    let game: &dyn Game = match &parsed.model {
        GameModel::Biased(g) => g,
        GameModel::Penalty(g) => g,
        GameModel::Lipschitz(g) => g,
    };
    let mut regrets = Vec::new();
    for (i, br) in brs.iter().enumerate() {
        regrets.push((br - game.utility(&r.profile, i)?).max(0.0));
    }
    let outcome = verify_epsilon_equilibrium(game, &r.profile, epsilon, &brs)?;
    let mut report = json!({
        "holds": outcome.holds(),
        "epsilon": epsilon,
        "regrets": regrets,
    });
    if let Verification::Fails { player, gap } = outcome {
        report["player"] = json!(if player == 0 { "row" } else { "col" });
        report["gap"] = json!(gap);
    }
    write(None, &render(report))
}

#[allow(clippy::too_many_arguments)]
fn gen(
    n: usize,
    norm: NormKind,
    norm_col: NormKind,
    d_row: f64,
    d_col: f64,
    seed: u64,
    plant: Option<usize>,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let g = match plant {
        None => generate_random_game(n, norm, norm_col, d_row, d_col, seed)?,
        Some(k) => generate_planted_game(n, norm, norm_col, d_row, d_col, seed, k)?,
    };
    write(out, &serialize_game(&GameDocument::Biased(BiasedDoc::from_game(&g))))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve { game, method, epsilon, k, workers, out, m_exponent, any, budget, timing, p } => {
            let found = solve(&game, method, epsilon, k, workers, out.as_deref(), m_exponent, any, budget, timing, p)?;
            return Ok(if found { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
        Command::BestResponse { game, player, against, oracle, l, epsilon, workers } => {
            best_response(&game, side(player), &against, oracle, l, epsilon, workers)?
        }
        Command::Verify { game, profile, epsilon } => verify(&game, &profile, epsilon)?,
        Command::Gen { n, norm, norm_col, d_row, d_col, seed, plant_q, out } => gen(
            n,
            norm.into(),
            norm_col.unwrap_or(norm).into(),
            d_row,
            d_col,
            seed,
            plant_q,
            out.as_deref(),
        )?,
        Command::Bench { norm, n, trials, seed, csv, d_row, d_col, workers, timing } => {
            let ensemble = Ensemble { norm: norm.into(), n, d_row, d_col };
            let rows = run_benchmark(&ensemble, trials, seed, workers, timing)?;
            match csv {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .map_err(|source| DocError::Io { path: path.clone(), source })?;
                    write_csv(&rows, file)?;
                }
                None => write_csv(&rows, std::io::stdout().lock())?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
