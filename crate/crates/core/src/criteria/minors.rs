//! Every 2x2 minor of every unfolding vanishes.
//!
//! A minor is a product of two amplitudes minus another, so with unit-norm
//! amplitudes it is bounded by sigma1*sigma2 of the unfolding; a minor counts
//! as zero when its modulus is at most `tol.rank`.

use crate::counters::{NoTally, OpTally};
use crate::error::Result;
use crate::state::{Amplitude, PureState};
use crate::tolerance::ToleranceConfig;
use crate::unfolding::build_unfolding;

use super::{check_inputs, Criterion, CriterionReport, ScanMode, Verdict, Witness};

pub fn minor_report<T: OpTally>(
    state: &PureState,
    tol: &ToleranceConfig,
    mode: ScanMode,
    tally: &mut T,
) -> Result<CriterionReport> {
    check_inputs(state, tol)?;
    let n = state.parties();
    let mut per_party = vec![None; n];
    // (|minor|, witness) of the largest violation seen so far
    let mut worst: Option<(f64, Witness)> = None;

    'parties: for k in 0..n {
        let unf = build_unfolding(state, k)?;
        let m = unf.matrix();
        let (rows, cols) = (m.rows(), m.cols());
        let mut party_max = 0.0f64;
        for p in 0..rows {
            let row_p = m.row(p);
            for q in p + 1..rows {
                let row_q = m.row(q);
                for s in 0..cols {
                    for t in s + 1..cols {
                        let value: Amplitude = row_p[s] * row_q[t] - row_p[t] * row_q[s];
                        tally.mul(2);
                        tally.add(1);
                        tally.cmp(1);
                        let mag = value.norm();
                        party_max = party_max.max(mag);
                        if mag > tol.rank && worst.as_ref().is_none_or(|(w, _)| mag > *w) {
                            worst = Some((
                                mag,
                                Witness::Minor {
                                    party: k,
                                    rows: [p, q],
                                    cols: [s, t],
                                    value,
                                },
                            ));
                            if mode == ScanMode::FirstViolation {
                                per_party[k] = Some(party_max);
                                break 'parties;
                            }
                        }
                    }
                }
            }
        }
        per_party[k] = Some(party_max);
    }
    Ok(CriterionReport {
        criterion: Criterion::Minors,
        separable: worst.is_none(),
        per_party,
        witness: worst.map(|(_, w)| w),
    })
}

pub fn minor_criterion(
    state: &PureState,
    tol: &ToleranceConfig,
    mode: ScanMode,
) -> Result<Verdict> {
    let report = minor_report(state, tol, mode, &mut NoTally)?;
    Verdict::from_reports(state, tol, vec![report])
}
