//! Column proportionality, in three steps per party:
//!
//! 1. build M_k;
//! 2. drop rows and columns whose entries are all zero (modulus <= `tol.zero`);
//! 3. pick the largest-modulus entry a* = M[rho*, s] as pivot (ties go to the
//!    lowest (row, column)) and check, for every other column t and every row
//!    rho, that a* M[rho, t] = M[rho*, t] M[rho, s].
//!
//! The identity in step 3 is homogeneous, so the residual is compared against
//! `tol.rank` times the norm of the pivot column.

use crate::counters::{NoTally, OpTally};
use crate::error::Result;
use crate::state::PureState;
use crate::tolerance::ToleranceConfig;
use crate::unfolding::{build_unfolding, prune};

use super::{check_inputs, Criterion, CriterionReport, ScanMode, Verdict, Witness};

pub fn proportionality_report<T: OpTally>(
    state: &PureState,
    tol: &ToleranceConfig,
    mode: ScanMode,
    tally: &mut T,
) -> Result<CriterionReport> {
    check_inputs(state, tol)?;
    let n = state.parties();
    let mut per_party = vec![None; n];
    // (residual / pivot column norm, witness) of the worst violation so far
    let mut worst: Option<(f64, Witness)> = None;

    'parties: for k in 0..n {
        let unf = build_unfolding(state, k)?;
        tally.cmp(state.profile().total() as u64);
        let pruned = prune(&unf, tol.zero)?;
        let m = &pruned.matrix;
        let (rows, cols) = (m.rows(), m.cols());

        let (mut prow, mut pcol, mut best) = (0, 0, -1.0);
        for i in 0..rows {
            for (j, entry) in m.row(i).iter().enumerate() {
                let mag = entry.norm();
                if mag > best {
                    (prow, pcol, best) = (i, j, mag);
                }
            }
        }
        tally.cmp((rows * cols) as u64);

        let pivot = m[(prow, pcol)];
        let col_norm = m.column(pcol).map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        tally.mul(rows as u64);
        tally.add(rows as u64);
        let threshold = tol.rank * col_norm;

        let mut party_max = 0.0f64;
        for t in (0..cols).filter(|&t| t != pcol) {
            let coefficient = m[(prow, t)];
            for rho in 0..rows {
                let lhs = pivot * m[(rho, t)];
                let rhs = coefficient * m[(rho, pcol)];
                let residual = (lhs - rhs).norm();
                tally.mul(2);
                tally.add(1);
                tally.cmp(1);
                let relative = residual / col_norm;
                party_max = party_max.max(relative);
                if residual > threshold && worst.as_ref().is_none_or(|(w, _)| relative > *w) {
                    worst = Some((
                        relative,
                        Witness::Column {
                            party: k,
                            pivot_row: pruned.kept_rows[prow],
                            pivot_col: pruned.kept_cols[pcol],
                            column: pruned.kept_cols[t],
                            row: pruned.kept_rows[rho],
                            pivot,
                            coefficient,
                            lhs,
                            rhs,
                            residual,
                            threshold,
                        },
                    ));
                    if mode == ScanMode::FirstViolation {
                        per_party[k] = Some(party_max);
                        break 'parties;
                    }
                }
            }
        }
        per_party[k] = Some(party_max);
    }
    Ok(CriterionReport {
        criterion: Criterion::Prop,
        separable: worst.is_none(),
        per_party,
        witness: worst.map(|(_, w)| w),
    })
}

pub fn proportionality_criterion(
    state: &PureState,
    tol: &ToleranceConfig,
    mode: ScanMode,
) -> Result<Verdict> {
    let report = proportionality_report(state, tol, mode, &mut NoTally)?;
    Verdict::from_reports(state, tol, vec![report])
}
