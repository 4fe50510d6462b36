//! Truncated q-series engine for eta quotients, theta functions and
//! partition congruences.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: exact and modular truncated power series.
//! - [`etalang`]: eta-quotient / theta expressions, their text syntax and
//!   identity catalogs.
//! - [`dissect`]: identity verification, the `p`-dissection of `(q;q)_inf`
//!   and residue-support analysis.
//! - [`congruence`]: congruence claims, checkers and the empirical scanner.
//! - [`oracle`]: brute-force colored partition counters.
//! - [`cli`]: the `qdissect` command-line front end.

pub mod arith;
pub mod cli;
pub mod congruence;
pub mod dissect;
pub mod etalang;
pub mod oracle;
pub mod report;
pub mod series;

pub use series::{Modulus, Ring, Series, SeriesError};
