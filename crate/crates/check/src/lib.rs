//! Randomized cross-checking of the `hanoi` algorithms against independent
//! brute-force references.

pub mod gen;
pub mod oracle;
pub mod suites;
