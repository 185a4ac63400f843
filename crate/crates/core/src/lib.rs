//! Computing and certifying approximate equilibria in continuous-action games.
//!
//! Three game families are covered:
//!
//! * **λ_p-Lipschitz games** ([`LipschitzGame`]): every player picks a point in the convex hull
//!   of finitely many vertices and utilities are Lipschitz in the L_p norm. [`lipschitz`] scans
//!   k-uniform profiles and either returns a 3ε-equilibrium or reports that no exact equilibrium
//!   exists.
//! * **Penalty games** ([`PenaltyGame`]): a bimatrix game where each player pays a Lipschitz
//!   penalty on their own mixed strategy. [`penalty`] runs the same search with the sample sizes
//!   that suit two-player penalty games.
//! * **Distance-biased games** ([`DistanceBiasedGame`]): the penalty is a weighted L1, squared L2
//!   or L∞ distance to a base strategy, or the inner product `d·xᵀx`. [`biased`] computes exact
//!   best responses combinatorially and [`approx`] runs the base algorithm with per-norm mixing
//!   weights.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, random game generation, worker
//! pools and the command line live in the `approxeq` crate.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approx;
pub mod biased;
mod error;
pub mod game;
pub mod lipschitz;
mod math;
pub mod oracle;
pub mod penalty;
pub mod uniform;

pub use error::{Error, Result};
pub use game::{
    penalty_value, regret, utility_biased, utility_penalty, ApproxResult, BimatrixGame,
    ConvexStrategySpace, DistanceBiasedGame, Game, LipschitzGame, MixedStrategy, NormKind, PenaltyGame,
    PenaltySpec, Player, Utility, PROB_TOL,
};
pub use lipschitz::LipschitzVerdict;
pub use uniform::CountVector;
