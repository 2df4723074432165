use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::planner::FeasibilityReport;
use crate::progressions::ApWitness;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cyclic modulus must be at least 1")]
    ZeroModulus,

    #[error("element has {found} coordinates, group has {expected} factors")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {index} is {value}, outside [0, {modulus})")]
    CoordinateOutOfRange { index: usize, value: u64, modulus: u64 },

    #[error("factor block {start}..{end} is not inside 0..{factors}")]
    BlockOutOfRange { start: usize, end: usize, factors: usize },

    #[error("factors {first} and {second} are not coprime")]
    NotCoprime { first: u64, second: u64 },

    #[error("{what} is too large to enumerate")]
    TooLarge { what: &'static str },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("color {color} is outside the palette 1..={palette}")]
    ColorOutOfRange { color: u32, palette: u32 },

    #[error("expected {expected} colors, got {found}")]
    ColorCountMismatch { expected: usize, found: usize },

    #[error("set is not {k}-AP-free: {witness}")]
    NotApFree { k: usize, witness: Box<ApWitness> },

    #[error("fiber key is not a member of the base set")]
    FiberKeyNotInSet,

    #[error("resampling gave up after {resamples} resamples")]
    ResampleCapExhausted { resamples: u64, witness: Box<ApWitness> },

    #[error("blow-up gave up after {attempts} attempts")]
    RetriesExhausted { attempts: u64, witness: Box<ApWitness> },

    #[error("found {found:?} primes in the window, need {needed}; widen the window")]
    NotEnoughPrimes { found: Vec<u64>, needed: usize },

    #[error("construction is infeasible under strict mode")]
    Infeasible { reports: Vec<FeasibilityReport> },

    #[error("final coloring failed verification: {witness}")]
    VerificationFailed { witness: Box<ApWitness> },
}
