//! Certificates, parallel verification and the `vdwforge` command line.

pub mod certificate;
mod commands;
pub mod parallel;

pub use commands::{parse_ratio, parse_window, run};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A monochromatic progression was found.
    pub const VERIFY_FAILED: i32 = 1;
    /// The parameters admit no plan (strict mode, too few primes, too large).
    pub const INFEASIBLE: i32 = 2;
    /// A randomized step ran out of attempts.
    pub const EXHAUSTED: i32 = 3;
    /// A search hit its budget before deciding.
    pub const INDETERMINATE: i32 = 4;
    pub const USAGE: i32 = 64;
    pub const MALFORMED: i32 = 65;
    pub const NO_INPUT: i32 = 66;
    pub const IO: i32 = 74;
}
