//! Library half of the command-line front end: the benchmark runner and the
//! summary-statistics engine, kept separate from argument parsing so they can
//! be tested directly.

pub mod bench;
pub mod stats;
