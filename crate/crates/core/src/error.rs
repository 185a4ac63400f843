use core::fmt;

/// Which payoff matrix a validation error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matrix {
    /// Row player payoffs `R`.
    Row,
    /// Column player payoffs `C`.
    Col,
}

/// Errors raised by game construction and the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    DimensionMismatch {
        /// Dimension required by the context.
        expected: usize,
        /// Dimension that was supplied.
        found: usize,
    },
    /// A probability vector has a negative or non-finite entry.
    NegativeProbability {
        /// Offending index.
        index: usize,
        /// Offending value.
        value: f64,
    },
    /// A probability vector does not sum to one.
    NotNormalized {
        /// Actual sum.
        sum: f64,
    },
    /// A strategy or matrix with no entries.
    Empty,
    /// A payoff matrix is not square.
    NotSquare {
        /// Matrix concerned.
        matrix: Matrix,
        /// Row with the wrong length.
        row: usize,
        /// Length of that row.
        len: usize,
    },
    /// A payoff is outside `[0, 1]`.
    PayoffOutOfRange {
        /// Matrix concerned.
        matrix: Matrix,
        /// Row of the cell.
        row: usize,
        /// Column of the cell.
        col: usize,
        /// Value found.
        value: f64,
    },
    /// A scalar parameter is outside its admissible range.
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// Value supplied.
        value: f64,
    },
    /// A vertex of a strategy space has a larger L_p norm than the declared γ.
    GammaTooSmall {
        /// Player owning the space.
        player: usize,
        /// Offending vertex.
        vertex: usize,
        /// Its L_p norm.
        norm: f64,
        /// Declared γ.
        gamma: f64,
    },
    /// Vertices of one strategy space have different dimensions.
    RaggedVertices {
        /// Player owning the space.
        player: usize,
    },
    /// A count vector with `k = 0` cannot be turned into a strategy.
    ZeroUniform,
    /// A sample-size selector would exceed its cap; ε is infeasibly small.
    SelectorCapExceeded {
        /// Configured cap.
        cap: u64,
    },
    /// The exhaustive support oracle is limited to small games.
    OracleTooLarge {
        /// Requested dimension.
        n: usize,
        /// Largest allowed dimension.
        max: usize,
    },
    /// The projected work of a search exceeds the configured budget.
    BudgetExceeded {
        /// Estimated utility evaluations.
        estimated: f64,
        /// Configured budget.
        budget: f64,
    },
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matrix::Row => f.write_str("row payoff matrix"),
            Matrix::Col => f.write_str("column payoff matrix"),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NegativeProbability { index, value } => {
                write!(f, "probability at index {index} is {value}, expected a finite value >= 0")
            }
            Error::NotNormalized { sum } => write!(f, "probabilities sum to {sum}, expected 1"),
            Error::Empty => f.write_str("empty strategy or matrix"),
            Error::NotSquare { matrix, row, len } => {
                write!(f, "{matrix} is not square: row {row} has {len} entries")
            }
            Error::PayoffOutOfRange { matrix, row, col, value } => {
                write!(f, "{matrix} cell [{row}][{col}] = {value} is outside [0, 1]")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
            Error::GammaTooSmall { player, vertex, norm, gamma } => write!(
                f,
                "vertex {vertex} of player {player} has norm {norm}, larger than gamma = {gamma}"
            ),
            Error::RaggedVertices { player } => {
                write!(f, "vertices of player {player} do not share one dimension")
            }
            Error::ZeroUniform => f.write_str("a 0-uniform count vector is not a strategy"),
            Error::SelectorCapExceeded { cap } => write!(
                f,
                "required sample size exceeds the cap of {cap}; epsilon is infeasibly small"
            ),
            Error::OracleTooLarge { n, max } => {
                write!(f, "exhaustive oracle limited to n <= {max}, got n = {n}")
            }
            Error::BudgetExceeded { estimated, budget } => write!(
                f,
                "search needs about {estimated:e} utility evaluations, budget is {budget:e}"
            ),
        }
    }
}

impl core::error::Error for Error {}
