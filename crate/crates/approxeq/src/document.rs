//! JSON game and result documents.
//!
//! Game documents carry a `type` tag (`biased`, `penalty` or `lipschitz`) and nested-row payoff
//! matrices. Numbers are written with 17 significant digits so every `f64` reads back exactly.

use std::str::FromStr;
use std::sync::Arc;

use approxeq_core::{
    ApproxResult, BimatrixGame, ConvexStrategySpace, DistanceBiasedGame, LipschitzGame,
    LipschitzVerdict, MixedStrategy, NormKind, PenaltyGame, PenaltySpec, Player, Utility,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, DocError};

const NORM_TAGS: &str = "l1, l2sq, linf, inner";

/// A distance-biased game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasedDoc {
    pub row: Vec<Vec<f64>>,
    pub col: Vec<Vec<f64>>,
    /// Defaults to the uniform strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_row: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_col: Option<Vec<f64>>,
    pub norm_row: String,
    pub norm_col: String,
    pub d_row: f64,
    pub d_col: f64,
}

/// One player's penalty in a penalty game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyFnDoc {
    /// `zero`, `l1`, `l2sq`, `linf` or `inner`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<f64>>,
    #[serde(default)]
    pub d: f64,
    /// L_p exponent of the declared Lipschitz constant, 2 by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Overrides the default Lipschitz constant of the builtin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

/// A bimatrix game with builtin penalties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyDoc {
    pub row: Vec<Vec<f64>>,
    pub col: Vec<Vec<f64>>,
    pub penalty_row: PenaltyFnDoc,
    pub penalty_col: PenaltyFnDoc,
}

/// A two-player Lipschitz game with a builtin utility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzDoc {
    pub row: Vec<Vec<f64>>,
    pub col: Vec<Vec<f64>>,
    /// `bilinear` or `bilinear_minus_inner`.
    pub utility: String,
    #[serde(default)]
    pub d_row: f64,
    #[serde(default)]
    pub d_col: f64,
    /// Vertex list per player; the simplex when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// Any game document.
#[derive(Debug, Clone, PartialEq)]
pub enum GameDocument {
    Biased(BiasedDoc),
    Penalty(PenaltyDoc),
    Lipschitz(LipschitzDoc),
}

/// A validated game.
#[derive(Debug, Clone)]
pub enum GameModel {
    Biased(DistanceBiasedGame),
    Penalty(PenaltyGame),
    Lipschitz(LipschitzGame),
}

/// A document together with the game it describes.
#[derive(Debug, Clone)]
pub struct ParsedGame {
    pub doc: GameDocument,
    pub model: GameModel,
}

fn from_value<T: DeserializeOwned>(value: Value) -> Result<T, DocError> {
    serde_path_to_error::deserialize(value).map_err(|e| DocError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn parse_value(text: &str) -> Result<Value, DocError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| DocError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| DocError::Json { path: ".".into(), message: e.to_string() })?;
    Ok(value)
}

fn norm(tag: &str, path: &str) -> Result<NormKind, DocError> {
    NormKind::from_tag(tag).ok_or_else(|| DocError::UnknownTag {
        path: path.into(),
        value: tag.into(),
        expected: NORM_TAGS,
    })
}

fn bimatrix(row: &[Vec<f64>], col: &[Vec<f64>]) -> Result<BimatrixGame, DocError> {
    BimatrixGame::new(row.to_vec(), col.to_vec()).map_err(invalid("row/col"))
}

fn strategy(values: &Option<Vec<f64>>, n: usize, path: &str) -> Result<MixedStrategy, DocError> {
    match values {
        None => Ok(MixedStrategy::uniform(n)),
        Some(v) => {
            if v.len() != n {
                return Err(DocError::Invalid {
                    path: path.into(),
                    source: approxeq_core::Error::DimensionMismatch { expected: n, found: v.len() },
                });
            }
            MixedStrategy::new(v.clone()).map_err(invalid(path))
        }
    }
}

impl BiasedDoc {
    pub fn build(&self) -> Result<DistanceBiasedGame, DocError> {
        let game = bimatrix(&self.row, &self.col)?;
        let n = game.n();
        DistanceBiasedGame::new(
            game,
            strategy(&self.base_row, n, "base_row")?,
            strategy(&self.base_col, n, "base_col")?,
            norm(&self.norm_row, "norm_row")?,
            norm(&self.norm_col, "norm_col")?,
            self.d_row,
            self.d_col,
        )
        .map_err(invalid("d_row/d_col"))
    }

    /// Document for an existing game.
    pub fn from_game(g: &DistanceBiasedGame) -> Self {
        BiasedDoc {
            row: rows(g.game().row_matrix(), g.n()),
            col: rows(g.game().col_matrix(), g.n()),
            base_row: Some(g.base(Player::Row).probs().to_vec()),
            base_col: Some(g.base(Player::Col).probs().to_vec()),
            norm_row: g.norm(Player::Row).tag().into(),
            norm_col: g.norm(Player::Col).tag().into(),
            d_row: g.weight(Player::Row),
            d_col: g.weight(Player::Col),
        }
    }
}

fn rows(flat: &[f64], n: usize) -> Vec<Vec<f64>> {
    flat.chunks(n).map(<[f64]>::to_vec).collect()
}

impl PenaltyFnDoc {
    fn build(&self, n: usize, path: &str) -> Result<PenaltySpec, DocError> {
        let p = self.p.unwrap_or(2.0);
        let spec = match self.kind.as_str() {
            "zero" => PenaltySpec::zero(p),
            tag => {
                let kind = NormKind::from_tag(tag).ok_or_else(|| DocError::UnknownTag {
                    path: format!("{path}.kind"),
                    value: tag.into(),
                    expected: "zero, l1, l2sq, linf, inner",
                })?;
                let base = match kind {
                    NormKind::Inner => vec![0.0; n],
                    _ => strategy(&self.base, n, &format!("{path}.base"))?.into_vec(),
                };
                PenaltySpec::from_norm(kind, base, self.d, p)
            }
        }
        .map_err(invalid(path))?;
        match self.lambda {
            None => Ok(spec),
            Some(lambda) => {
                let eval = spec.clone();
                PenaltySpec::new(Arc::new(move |x: &[f64]| eval.eval(x)), lambda, p, spec.description())
                    .map_err(invalid(path))
            }
        }
    }

    /// Builtin for a biased penalty.
    pub fn from_norm(norm: NormKind, base: &[f64], d: f64) -> Self {
        PenaltyFnDoc {
            kind: norm.tag().into(),
            base: (norm != NormKind::Inner).then(|| base.to_vec()),
            d,
            p: None,
            lambda: None,
        }
    }
}

impl PenaltyDoc {
    pub fn build(&self) -> Result<PenaltyGame, DocError> {
        let game = bimatrix(&self.row, &self.col)?;
        let n = game.n();
        let row = self.penalty_row.build(n, "penalty_row")?;
        let col = self.penalty_col.build(n, "penalty_col")?;
        Ok(PenaltyGame::new(game, row, col))
    }

    /// The biased game posed as a penalty game.
    pub fn from_biased(doc: &BiasedDoc) -> Result<Self, DocError> {
        let g = doc.build()?;
        Ok(PenaltyDoc {
            row: doc.row.clone(),
            col: doc.col.clone(),
            penalty_row: PenaltyFnDoc::from_norm(g.norm(Player::Row), g.base(Player::Row).probs(), doc.d_row),
            penalty_col: PenaltyFnDoc::from_norm(g.norm(Player::Col), g.base(Player::Col).probs(), doc.d_col),
        })
    }
}

impl LipschitzDoc {
    pub fn build(&self) -> Result<LipschitzGame, DocError> {
        let game = bimatrix(&self.row, &self.col)?;
        let n = game.n();
        let (d_row, d_col) = match self.utility.as_str() {
            "bilinear" => (0.0, 0.0),
            "bilinear_minus_inner" => (self.d_row, self.d_col),
            other => {
                return Err(DocError::UnknownTag {
                    path: "utility".into(),
                    value: other.into(),
                    expected: "bilinear, bilinear_minus_inner",
                })
            }
        };
        let p = self.p.unwrap_or(2.0);
        let Some(vertices) = &self.vertices else {
            let base = LipschitzGame::bilinear(&game, d_row, d_col, p).map_err(invalid("utility"))?;
            return LipschitzGame::new(
                vec![base.space(0).clone(), base.space(1).clone()],
                utilities(&game, d_row, d_col),
                self.lambda.unwrap_or(base.lambda()),
                p,
                self.gamma.unwrap_or(base.gamma()),
            )
            .map_err(invalid("lambda/p/gamma"));
        };
        if vertices.len() != 2 {
            return Err(DocError::Invalid {
                path: "vertices".into(),
                source: approxeq_core::Error::DimensionMismatch { expected: 2, found: vertices.len() },
            });
        }
        let mut spaces = Vec::with_capacity(2);
        for (i, v) in vertices.iter().enumerate() {
            let path = format!("vertices[{i}]");
            let space = ConvexStrategySpace::new(v.clone()).map_err(|e| DocError::Invalid {
                path: path.clone(),
                source: match e {
                    approxeq_core::Error::RaggedVertices { .. } => {
                        approxeq_core::Error::RaggedVertices { player: i }
                    }
                    other => other,
                },
            })?;
            if space.dim() != n {
                return Err(DocError::Invalid {
                    path,
                    source: approxeq_core::Error::DimensionMismatch { expected: n, found: space.dim() },
                });
            }
            spaces.push(space);
        }
        let lambda = self.lambda.ok_or(DocError::Missing {
            path: "lambda".into(),
            reason: "required when vertices are given",
        })?;
        let gamma = self.gamma.unwrap_or_else(|| {
            spaces
                .iter()
                .flat_map(|s| s.vertices())
                .map(|v| v.iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p))
                .fold(0.0, f64::max)
        });
        LipschitzGame::new(spaces, utilities(&game, d_row, d_col), lambda, p, gamma)
            .map_err(invalid("lambda/p/gamma"))
    }
}

fn utilities(game: &BimatrixGame, d_row: f64, d_col: f64) -> Vec<Utility> {
    let (a, b) = (game.clone(), game.clone());
    let row: Utility = Arc::new(move |pr: &[&[f64]]| {
        a.bilinear(Player::Row, pr[0], pr[1]) - d_row * pr[0].iter().map(|v| v * v).sum::<f64>()
    });
    let col: Utility = Arc::new(move |pr: &[&[f64]]| {
        b.bilinear(Player::Col, pr[0], pr[1]) - d_col * pr[1].iter().map(|v| v * v).sum::<f64>()
    });
    vec![row, col]
}

impl GameDocument {
    pub fn build(&self) -> Result<GameModel, DocError> {
        Ok(match self {
            GameDocument::Biased(d) => GameModel::Biased(d.build()?),
            GameDocument::Penalty(d) => GameModel::Penalty(d.build()?),
            GameDocument::Lipschitz(d) => GameModel::Lipschitz(d.build()?),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GameDocument::Biased(_) => "biased",
            GameDocument::Penalty(_) => "penalty",
            GameDocument::Lipschitz(_) => "lipschitz",
        }
    }

    fn to_value(&self) -> Value {
        let mut v = match self {
            GameDocument::Biased(d) => serde_json::to_value(d),
            GameDocument::Penalty(d) => serde_json::to_value(d),
            GameDocument::Lipschitz(d) => serde_json::to_value(d),
        }
        .expect("game documents serialize");
        if let Value::Object(map) = &mut v {
            map.insert("type".into(), Value::String(self.kind().into()));
        }
        v
    }
}

/// Parses and validates a game document.
pub fn parse_game(text: &str) -> Result<ParsedGame, DocError> {
    let mut value = parse_value(text)?;
    let tag = match &mut value {
        Value::Object(map) => map.remove("type"),
        _ => None,
    };
    let doc = match tag {
        Some(Value::String(t)) if t == "biased" => GameDocument::Biased(from_value(value)?),
        Some(Value::String(t)) if t == "penalty" => GameDocument::Penalty(from_value(value)?),
        Some(Value::String(t)) if t == "lipschitz" => GameDocument::Lipschitz(from_value(value)?),
        Some(other) => {
            return Err(DocError::UnknownTag {
                path: "type".into(),
                value: other.to_string().trim_matches('"').into(),
                expected: "biased, penalty, lipschitz",
            })
        }
        None => return Err(DocError::Missing { path: "type".into(), reason: "every game names its type" }),
    };
    let model = doc.build()?;
    Ok(ParsedGame { doc, model })
}

/// Writes a game document.
pub fn serialize_game(doc: &GameDocument) -> String {
    render(doc.to_value())
}

/// Serialized form of a search verdict or a single approximate result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    /// `equilibrium` or `no_exact_equilibrium`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regrets: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_used: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profiles_checked: Option<u64>,
}

impl ResultDocument {
    pub fn from_verdict(v: &LipschitzVerdict) -> Self {
        let empty = ResultDocument {
            verdict: String::new(),
            method: None,
            epsilon: None,
            profile: None,
            regrets: None,
            guarantee: None,
            delta: None,
            analytic_bound: None,
            runtime_ms: None,
            k_used: None,
            profiles_checked: None,
        };
        match v {
            LipschitzVerdict::Equilibrium(r) => ResultDocument {
                verdict: "equilibrium".into(),
                method: Some(r.method.clone()),
                profile: Some(r.profile.iter().map(|s| s.probs().to_vec()).collect()),
                regrets: Some(r.regrets.clone()),
                guarantee: Some(r.guarantee),
                delta: r.delta,
                analytic_bound: r.analytic_bound,
                runtime_ms: Some(r.runtime_ms),
                ..empty
            },
            LipschitzVerdict::NoExactEquilibrium { k_used, profiles_checked } => ResultDocument {
                verdict: "no_exact_equilibrium".into(),
                k_used: Some(*k_used),
                profiles_checked: Some(*profiles_checked),
                ..empty
            },
        }
    }

    pub fn to_verdict(&self) -> Result<LipschitzVerdict, DocError> {
        let need = |path: &str| DocError::Missing { path: path.into(), reason: "required by the verdict" };
        match self.verdict.as_str() {
            "equilibrium" => {
                let profile = self
                    .profile
                    .as_ref()
                    .ok_or_else(|| need("profile"))?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| MixedStrategy::new(s.clone()).map_err(invalid(&format!("profile[{i}]"))))
                    .collect::<Result<_, _>>()?;
                Ok(LipschitzVerdict::Equilibrium(ApproxResult {
                    profile,
                    regrets: self.regrets.clone().ok_or_else(|| need("regrets"))?,
                    guarantee: self.guarantee.ok_or_else(|| need("guarantee"))?,
                    method: self.method.clone().ok_or_else(|| need("method"))?,
                    runtime_ms: self.runtime_ms.unwrap_or(0.0),
                    delta: self.delta,
                    analytic_bound: self.analytic_bound,
                }))
            }
            "no_exact_equilibrium" => Ok(LipschitzVerdict::NoExactEquilibrium {
                k_used: self.k_used.ok_or_else(|| need("k_used"))?,
                profiles_checked: self.profiles_checked.ok_or_else(|| need("profiles_checked"))?,
            }),
            other => Err(DocError::UnknownTag {
                path: "verdict".into(),
                value: other.into(),
                expected: "equilibrium, no_exact_equilibrium",
            }),
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        from_value(parse_value(text)?)
    }

    pub fn render(&self) -> String {
        render(serde_json::to_value(self).expect("result documents serialize"))
    }
}

/// Writes a verdict.
pub fn serialize_result(v: &LipschitzVerdict) -> String {
    ResultDocument::from_verdict(v).render()
}

/// Writes a single approximate result as an equilibrium verdict.
pub fn serialize_approx(r: &ApproxResult) -> String {
    serialize_result(&LipschitzVerdict::Equilibrium(r.clone()))
}

/// Reads a verdict.
pub fn parse_result(text: &str) -> Result<LipschitzVerdict, DocError> {
    ResultDocument::parse(text)?.to_verdict()
}

/// Pretty JSON with every float rewritten to 17 significant digits.
pub fn render(mut value: Value) -> String {
    fix_floats(&mut value);
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

fn fix_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *n = serde_json::Number::from_str(&format!("{x:.16e}")).expect("formatted float parses");
            }
        }
        Value::Array(items) => items.iter_mut().for_each(fix_floats),
        Value::Object(map) => map.values_mut().for_each(fix_floats),
        _ => {}
    }
}

/// Parses `"0.5,0.5"` into numbers.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, DocError> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| {
            let v: f64 = s.trim().parse().map_err(|e: std::num::ParseFloatError| DocError::Json {
                path: format!("[{i}]"),
                message: e.to_string(),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(DocError::Json { path: format!("[{i}]"), message: format!("{v} is not finite") })
            }
        })
        .collect()
}
