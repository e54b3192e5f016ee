//! Full-separability tests for n-partite pure states.
//!
//! A state is fully separable exactly when every single-party unfolding M_k
//! has rank one. Four equivalent criteria are provided in [`criteria`], an
//! independent Schmidt-rank cross-check in [`oracle`], and the batch tooling
//! behind the `puresep` binary in [`io`], [`bench`] and [`cli`].

pub mod bench;
pub mod cli;
pub mod counters;
pub mod criteria;
pub mod density;
pub mod error;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod state;
pub mod tolerance;
pub mod unfolding;

pub use counters::{NoTally, OpCounters, OpTally};
pub use criteria::factors::{extract_factors, Factorization};
pub use criteria::{classify, Criterion, CriterionReport, ScanMode, Verdict, Witness};
pub use error::{Result, SepError};
pub use oracle::{cross_validate, oracle_schmidt, OracleReport};
pub use state::{Amplitude, DimensionProfile, PureState};
pub use tolerance::ToleranceConfig;
