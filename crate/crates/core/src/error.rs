use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid probability vector: {0}")]
    InvalidState(String),

    #[error("probability {value} outside [{min}, {max}]")]
    ProbabilityOutOfRange { value: f64, min: f64, max: f64 },

    #[error("state has {0} outcome(s); a secret bit needs at least 2")]
    TooFewOutcomes(usize),

    #[error("labeling covers {got} symbols but the state has {expected}")]
    LabelingNotTotal { expected: usize, got: usize },

    #[error("chain needs at least one link")]
    EmptyChain,

    #[error("trial count must be positive")]
    NoTrials,

    #[error("lattice dimensions {rows}x{cols} too small (minimum 2x2)")]
    LatticeTooSmall { rows: usize, cols: usize },

    #[error("multiplicity {0} unsupported; conversion formulas exist for 1 or 2 parallel links")]
    UnsupportedMultiplicity(usize),

    #[error("edge {0} has no resolved open probability")]
    UnresolvedEdge(usize),

    #[error("transform requires a doubled-edge honeycomb: {0}")]
    WrongLatticeFamily(String),

    #[error("unknown node {0}")]
    UnknownNode(usize),

    #[error("source and target node are the same ({0})")]
    SameNode(usize),

    #[error(
        "interval [{lo}, {hi}] does not bracket crossing frequency 1/2 (got {f_lo} .. {f_hi})"
    )]
    NotBracketing {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("refusing enumeration: {0}")]
    CostGuard(String),

    #[error("graph text parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
