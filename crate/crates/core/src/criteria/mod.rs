//! Full-separability decisions for pure states.
//!
//! A pure state is a product of single-party states exactly when every mode-k
//! unfolding M_k has rank one. The four criteria test that condition through
//! different quantities:
//!
//! * [`det`]: det(M_k M_k^dagger - E) = 0 for every k,
//! * [`rank`]: sigma2/sigma1 of every M_k vanishes,
//! * [`minors`]: every 2x2 minor of every M_k vanishes,
//! * [`proportionality`]: after dropping zero rows and columns, every column
//!   of M_k is proportional to a pivot column.
//!
//! In exact arithmetic they always agree. In floating point they can split
//! near the rank threshold, and [`classify`] reports that as a conflict
//! instead of picking a winner.

pub mod det;
pub mod factors;
pub mod minors;
pub mod proportionality;
pub mod rank;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::counters::NoTally;
use crate::error::{Result, SepError};
use crate::state::{Amplitude, DimensionProfile, PureState};
use crate::tolerance::ToleranceConfig;

pub use det::{det_criterion, det_report, det_value_dense, det_value_spectral, DetPath};
pub use factors::{extract_factors, Factorization};
pub use minors::{minor_criterion, minor_report};
pub use proportionality::{proportionality_criterion, proportionality_report};
pub use rank::{rank_criterion, rank_report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Det,
    Rank,
    Minors,
    Prop,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::Det,
        Criterion::Rank,
        Criterion::Minors,
        Criterion::Prop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Det => "det",
            Criterion::Rank => "rank",
            Criterion::Minors => "minors",
            Criterion::Prop => "prop",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Criterion {
    type Err = SepError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(Criterion::Det),
            "rank" => Ok(Criterion::Rank),
            "minors" => Ok(Criterion::Minors),
            "prop" => Ok(Criterion::Prop),
            other => Err(SepError::Argument(format!("unknown criterion '{other}'"))),
        }
    }
}

/// Whether the minor and column scans stop at the first violation or keep
/// going and report the largest one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    #[default]
    FirstViolation,
    Exhaustive,
}

/// Coordinates at which a zero-test fails. Row indices are rows of M_k
/// (complement multi-index, last party fastest); columns are levels of party k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Determinant {
        party: usize,
        value: f64,
    },
    RankRatio {
        party: usize,
        ratio: f64,
    },
    Minor {
        party: usize,
        rows: [usize; 2],
        cols: [usize; 2],
        value: Amplitude,
    },
    /// pivot * M[row, column] != coefficient * M[row, pivot_col], where
    /// pivot = M[pivot_row, pivot_col] and coefficient = M[pivot_row, column].
    Column {
        party: usize,
        pivot_row: usize,
        pivot_col: usize,
        column: usize,
        row: usize,
        pivot: Amplitude,
        coefficient: Amplitude,
        lhs: Amplitude,
        rhs: Amplitude,
        residual: f64,
        threshold: f64,
    },
}

impl Witness {
    pub fn party(&self) -> usize {
        match *self {
            Witness::Determinant { party, .. }
            | Witness::RankRatio { party, .. }
            | Witness::Minor { party, .. }
            | Witness::Column { party, .. } => party,
        }
    }

    /// Re-evaluates the cited zero-test from the raw amplitudes, by a route
    /// independent of the one that produced the witness. Returns
    /// (violation, threshold); a genuine witness has violation > threshold.
    pub fn recheck(&self, state: &PureState, tol: &ToleranceConfig) -> Result<(f64, f64)> {
        match *self {
            Witness::Determinant { party, .. } => {
                let rho = crate::density::partial_trace(state, party)?;
                let mut shifted = rho.matrix;
                for i in 0..shifted.rows() {
                    shifted[(i, i)] -= Amplitude::new(1.0, 0.0);
                }
                let det = crate::linalg::determinant(&shifted, &mut NoTally)?;
                Ok((det.norm(), tol.det))
            }
            Witness::RankRatio { party, .. } => {
                let rho = crate::density::partial_trace(state, party)?;
                let e = rho.eigenvalues()?;
                let ratio = if e.len() < 2 {
                    0.0
                } else {
                    (e[1].max(0.0) / e[0]).sqrt()
                };
                Ok((ratio, tol.rank))
            }
            Witness::Minor {
                party, rows, cols, ..
            } => {
                let at = |row, col| entry(state, party, row, col);
                let value = at(rows[0], cols[0])? * at(rows[1], cols[1])?
                    - at(rows[0], cols[1])? * at(rows[1], cols[0])?;
                Ok((value.norm(), tol.rank))
            }
            Witness::Column {
                party,
                pivot_row,
                pivot_col,
                column,
                row,
                ..
            } => {
                let at = |row, col| entry(state, party, row, col);
                let pivot = at(pivot_row, pivot_col)?;
                let residual = (pivot * at(row, column)?
                    - at(pivot_row, column)? * at(row, pivot_col)?)
                .norm();
                let rows = state.profile().complement(party);
                let mut col_norm = 0.0;
                for i in 0..rows {
                    col_norm += at(i, pivot_col)?.norm_sqr();
                }
                Ok((residual, tol.rank * col_norm.sqrt()))
            }
        }
    }
}

/// Amplitude at (row, col) of M_k, addressed through the multi-index rather
/// than the unfolding's stride arithmetic.
fn entry(state: &PureState, party: usize, row: usize, col: usize) -> Result<Amplitude> {
    let multi = complement_multi_index(state.profile(), party, row, col);
    state.amplitude(&multi)
}

fn complement_multi_index(
    profile: &DimensionProfile,
    party: usize,
    mut row: usize,
    col: usize,
) -> Vec<usize> {
    let mut multi = vec![0; profile.parties()];
    for s in (0..profile.parties()).rev() {
        if s == party {
            multi[s] = col;
        } else {
            multi[s] = row % profile.dim(s);
            row /= profile.dim(s);
        }
    }
    multi
}

/// Outcome of one criterion on one state.
///
/// `per_party[k]` is the criterion's evidence for party k: the determinant
/// value, sigma2/sigma1, the largest |minor|, or the largest column residual
/// divided by the pivot column norm. It is `None` for parties skipped after
/// an early exit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub separable: bool,
    pub per_party: Vec<Option<f64>>,
    pub witness: Option<Witness>,
}

/// Decision on one state, possibly backed by several agreeing criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub separable: bool,
    pub reports: Vec<CriterionReport>,
    pub factors: Option<Vec<PureState>>,
    pub fidelity: Option<f64>,
}

impl Verdict {
    pub fn report(&self, criterion: Criterion) -> Option<&CriterionReport> {
        self.reports.iter().find(|r| r.criterion == criterion)
    }

    /// Combines agreeing reports; attaches factors when they say separable.
    pub fn from_reports(
        state: &PureState,
        tol: &ToleranceConfig,
        reports: Vec<CriterionReport>,
    ) -> Result<Self> {
        let first = reports
            .first()
            .ok_or_else(|| SepError::Argument("no criterion selected".into()))?;
        if let Some(other) = reports.iter().find(|r| r.separable != first.separable) {
            return Err(SepError::Conflict {
                first: Box::new(first.clone()),
                second: Box::new(other.clone()),
            });
        }
        let separable = first.separable;
        let (factors, fidelity) = if separable {
            let f = factors::factors_from_rows(state, tol)?;
            (Some(f.factors), Some(f.fidelity))
        } else {
            (None, None)
        };
        Ok(Self {
            separable,
            reports,
            factors,
            fidelity,
        })
    }
}

pub fn run_report(
    state: &PureState,
    tol: &ToleranceConfig,
    criterion: Criterion,
    mode: ScanMode,
) -> Result<CriterionReport> {
    match criterion {
        Criterion::Det => det_report(state, tol, DetPath::Spectral, &mut NoTally),
        Criterion::Rank => rank_report(state, tol, &mut NoTally),
        Criterion::Minors => minor_report(state, tol, mode, &mut NoTally),
        Criterion::Prop => proportionality_report(state, tol, mode, &mut NoTally),
    }
}

/// Runs the selected criteria and merges their verdicts. Disagreement is an
/// error carrying both reports.
pub fn classify(
    state: &PureState,
    tol: &ToleranceConfig,
    criteria: &[Criterion],
    mode: ScanMode,
) -> Result<Verdict> {
    tol.validate()?;
    state.require_normalized(tol)?;
    if criteria.is_empty() {
        return Err(SepError::Argument("no criterion selected".into()));
    }
    let reports = criteria
        .iter()
        .map(|&c| run_report(state, tol, c, mode))
        .collect::<Result<Vec<_>>>()?;
    Verdict::from_reports(state, tol, reports)
}

pub(crate) fn check_inputs(state: &PureState, tol: &ToleranceConfig) -> Result<()> {
    tol.validate()?;
    state.require_normalized(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cat_state, product_state, random_product_state, w_state};

    #[test]
    fn criterion_names_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        assert!("bogus".parse::<Criterion>().is_err());
    }

    #[test]
    fn classify_cat3_all_entangled() {
        let tol = ToleranceConfig::default();
        let cat = cat_state(3, 2).unwrap();
        let v = classify(&cat, &tol, &Criterion::ALL, ScanMode::FirstViolation).unwrap();
        assert!(!v.separable);
        assert_eq!(v.reports.len(), 4);
        for r in &v.reports {
            let w = r.witness.as_ref().unwrap();
            let (violation, threshold) = w.recheck(&cat, &tol).unwrap();
            assert!(violation > threshold, "{:?}", r.criterion);
        }
        assert!(v.factors.is_none() && v.fidelity.is_none());
    }

    #[test]
    fn classify_product_attaches_factors() {
        let tol = ToleranceConfig::default();
        let p = DimensionProfile::new(&[2, 3, 2]).unwrap();
        let s = random_product_state(&p, 4).unwrap();
        let v = classify(&s, &tol, &Criterion::ALL, ScanMode::Exhaustive).unwrap();
        assert!(v.separable);
        assert!(v.fidelity.unwrap() >= 1.0 - 1e-9);
        let rebuilt = product_state(v.factors.as_ref().unwrap(), &tol).unwrap();
        assert!(rebuilt.fidelity(&s).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn classify_rejects_bad_inputs() {
        let tol = ToleranceConfig::default();
        let w = w_state(3).unwrap();
        assert!(classify(&w, &tol, &[], ScanMode::FirstViolation).is_err());
        let unnormalized = w.scale(Amplitude::new(2.0, 0.0));
        assert!(matches!(
            classify(
                &unnormalized,
                &tol,
                &[Criterion::Rank],
                ScanMode::FirstViolation
            ),
            Err(SepError::Precondition(_))
        ));
    }

    #[test]
    fn classify_surfaces_conflicts() {
        // |0><0| plus a rank-one 3x3 block of strength eps: sigma2/sigma1 = eps
        // but every minor is at most eps/3.
        let eps = 2e-7;
        let p = DimensionProfile::new(&[4, 4]).unwrap();
        let mut amps = vec![Amplitude::new(0.0, 0.0); 16];
        amps[0] = Amplitude::new(1.0, 0.0);
        for i in 1..4 {
            for j in 1..4 {
                amps[i * 4 + j] = Amplitude::new(eps / 3.0, 0.0);
            }
        }
        let s = PureState::normalized(p, amps).unwrap();
        let tol = ToleranceConfig::default();
        match classify(
            &s,
            &tol,
            &[Criterion::Rank, Criterion::Minors],
            ScanMode::FirstViolation,
        ) {
            Err(SepError::Conflict { first, second }) => {
                assert_eq!(first.criterion, Criterion::Rank);
                assert!(!first.separable);
                assert_eq!(second.criterion, Criterion::Minors);
                assert!(second.separable);
            }
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn complement_index_matches_unfolding_layout() {
        let p = DimensionProfile::new(&[2, 3, 4]).unwrap();
        let s = crate::generators::random_state(&p, 2).unwrap();
        for k in 0..3 {
            let unf = crate::unfolding::build_unfolding(&s, k).unwrap();
            for row in 0..unf.rows() {
                for col in 0..unf.cols() {
                    assert_eq!(entry(&s, k, row, col).unwrap(), unf.matrix()[(row, col)]);
                }
            }
        }
    }
}
