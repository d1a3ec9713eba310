use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("k must be at least 2 (got {0})")]
    KTooSmall(u32),

    #[error("odd prime required (got {0})")]
    OddPrimeRequired(u64),

    #[error("lift level l must be at least 1")]
    ZeroLiftLevel,

    #[error("parameter overflow: {0}")]
    ParamOverflow(String),

    #[error("lift multiplier must be at least 2 (got {0})")]
    BadLiftMultiplier(u64),

    #[error("zero coordinate mod p: equivalence classes are only defined on nonzero residues")]
    ZeroCoordinate,

    #[error("coordinate {coord} invalid for ansatz (k={k}, p={p}, l={l}): {reason}")]
    BadCoordinate {
        coord: u64,
        k: u32,
        p: u64,
        l: u64,
        reason: String,
    },

    #[error("tuple has {got} coordinates, expected {expected}")]
    BadTupleLength { got: usize, expected: usize },

    #[error("diagram parse error at token {position}: {message}")]
    DiagramParse { position: usize, message: String },

    #[error("projection divisor {divisor} does not match the accumulated lift level {level}")]
    ProjectDivisorMismatch { divisor: u64, level: u64 },

    #[error("termination mode requires k+1 to be an odd prime (k={0})")]
    TerminationNeedsOddPrime(u32),

    #[error("checkpoint corrupt at stage {index} ({label}): digest mismatch in {}", path.display())]
    CheckpointCorrupt {
        index: usize,
        label: String,
        path: PathBuf,
    },

    #[error("malformed file {}: {reason}", path.display())]
    MalformedFile { path: PathBuf, reason: String },

    #[error("workdir {} already contains stage files; pass resume to continue", .0.display())]
    WorkdirNotEmpty(PathBuf),

    #[error("vector is not in N_k: {0}")]
    NotInNk(String),

    #[error("exhaustive check of {size} vectors exceeds the cap of {cap}; use the override to force it")]
    ExhaustiveCapExceeded { size: u128, cap: u128 },

    #[error("gate closed for k={k}, p={p}: {reason}")]
    GateClosed { k: u32, p: u64, reason: String },

    #[error("fiber verification found {improper} improper elements for k={k}, p={p}")]
    GateVerificationFailed { k: u32, p: u64, improper: u64 },

    #[error("ledger error: {0}")]
    Ledger(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
