//! Holds only the `acceptance` test target.
//!
//! It sits in its own package, ordered after the others, so a failing
//! criterion never stops the rest of the workspace tests from running.
