//! Colorings of finite abelian groups without monochromatic arithmetic
//! progressions.
//!
//! The crate covers the whole construction chain: cyclic products and the
//! CRT flattening ([`group`]), progression search and the word-packed
//! verifier ([`progressions`]), the randomized blow-up machinery
//! ([`constructions`]), exact feasibility arithmetic ([`planner`]) and
//! exhaustive small-case search ([`oracle`]).
//!
//! Everything here is `no_std` + `alloc`. File formats, timing and threads
//! live in the `vdwforge` companion crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod constructions;
mod error;
pub mod group;
pub mod oracle;
pub mod planner;
pub mod progressions;

pub use error::{Error, Result};
pub use group::{CrtMap, Element, Group};
pub use progressions::{ApWitness, Coloring, VerifyMode};

/// Largest group order that any enumerating routine will accept.
pub const ENUMERATION_LIMIT: u64 = 1 << 28;
