//! Brute-force Schmidt ranks across every single-party cut.
//!
//! This module is a cross-check for the criteria and deliberately shares no
//! code with them: it builds each unfolding with its own index loop over the
//! flat amplitude vector and takes singular values of M_k directly by
//! one-sided Jacobi, never forming M_k^dagger M_k.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::criteria::{run_report, Criterion, ScanMode};
use crate::error::{Result, SepError};
use crate::state::{Amplitude, PureState};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Singular values of M_k, descending, one list per party.
    pub singular_values: Vec<Vec<f64>>,
    /// Number of singular values above `tol.rank * sigma1`, per party.
    pub schmidt_numbers: Vec<usize>,
    /// sigma2 / sigma1 per party.
    pub margins: Vec<f64>,
    pub separable: bool,
}

impl OracleReport {
    pub fn max_margin(&self) -> f64 {
        self.margins.iter().copied().fold(0.0, f64::max)
    }
}

pub fn oracle_schmidt(state: &PureState, tol: &ToleranceConfig) -> Result<OracleReport> {
    tol.validate()?;
    state.require_normalized(tol)?;
    let mut singular_values = Vec::new();
    let mut schmidt_numbers = Vec::new();
    let mut margins = Vec::new();
    for k in 0..state.parties() {
        let m = unfold_by_loop(state, k);
        let sv = singular_values_of(&m, state.dims()[k])?;
        let s1 = sv[0];
        schmidt_numbers.push(sv.iter().filter(|&&s| s > tol.rank * s1).count());
        margins.push(if sv.len() > 1 && s1 > 0.0 {
            sv[1] / s1
        } else {
            0.0
        });
        singular_values.push(sv);
    }
    let separable = schmidt_numbers.iter().all(|&c| c == 1);
    Ok(OracleReport {
        singular_values,
        schmidt_numbers,
        margins,
        separable,
    })
}

/// Rows of M_k as vectors, built by decoding every flat index into its
/// multi-index and re-encoding the complement.
fn unfold_by_loop(state: &PureState, k: usize) -> Vec<Vec<Amplitude>> {
    let dims = state.dims();
    let dk = dims[k];
    let rows = state.amplitudes().len() / dk;
    let mut m = vec![vec![Amplitude::new(0.0, 0.0); dk]; rows];
    let mut digits = vec![0usize; dims.len()];
    for (flat, &amp) in state.amplitudes().iter().enumerate() {
        let mut rest = flat;
        for s in (0..dims.len()).rev() {
            digits[s] = rest % dims[s];
            rest /= dims[s];
        }
        let mut row = 0;
        for s in 0..dims.len() {
            if s != k {
                row = row * dims[s] + digits[s];
            }
        }
        m[row][digits[k]] = amp;
    }
    m
}

const SWEEP_LIMIT: usize = 60;

/// Singular values of M (given as rows), descending, by one-sided Jacobi:
/// pairs of columns are rotated until all are mutually orthogonal, and the
/// column norms are then the singular values. Working on M itself rather
/// than on M^dagger M keeps small singular values accurate to rounding
/// level instead of to its square root.
fn singular_values_of(rows: &[Vec<Amplitude>], cols: usize) -> Result<Vec<f64>> {
    let mut a: Vec<Vec<Amplitude>> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let dot = |x: &[Amplitude], y: &[Amplitude]| -> Amplitude {
        x.iter().zip(y).map(|(u, v)| u.conj() * v).sum()
    };
    // a rotation leaves a_p^dagger a_q at rounding level, which grows with column length
    let threshold = rows.len().max(1) as f64 * f64::EPSILON;
    // columns below rounding level of the whole matrix are noise and cannot be orthogonalized
    let frobenius: f64 = a.iter().map(|col| dot(col, col).re).sum();
    let negligible = threshold * threshold * frobenius;
    let mut converged = false;
    for _ in 0..SWEEP_LIMIT {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&a[p], &a[p]).re;
                let beta = dot(&a[q], &a[q]).re;
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if alpha <= negligible
                    || beta <= negligible
                    || g <= threshold * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                // turn column q so that a_p^dagger a_q is real, then rotate in the plane
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                let (left, right) = a.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let yq = *y * phase;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SepError::numerical(format!(
            "one-sided Jacobi did not converge in {SWEEP_LIMIT} sweeps"
        )));
    }
    let mut sv: Vec<f64> = a.iter().map(|col| dot(col, col).re.sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// One state's outcome in a cross-validation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub index: usize,
    pub oracle_separable: bool,
    pub margin: f64,
    pub decisive: bool,
    /// Verdict per criterion; `None` if the criterion failed to run.
    pub verdicts: BTreeMap<Criterion, Option<bool>>,
}

impl CrossCheck {
    pub fn unanimous(&self) -> bool {
        self.verdicts
            .values()
            .all(|v| *v == Some(self.oracle_separable))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub checks: Vec<CrossCheck>,
    /// Labels for the rows/columns of `agreement`: the four criteria, then "oracle".
    pub deciders: Vec<String>,
    /// agreement[i][j]: number of states on which deciders i and j agree.
    pub agreement: Vec<Vec<usize>>,
    /// States whose margin sits in the indecisive band; excluded from `disagreements`.
    pub indecisive: Vec<usize>,
    /// Decisive states on which some decider disagrees with the oracle.
    pub disagreements: Vec<usize>,
}

/// Runs all four criteria and the oracle on every state of the battery.
pub fn cross_validate(battery: &[PureState], tol: &ToleranceConfig) -> Result<CrossValidation> {
    if battery.is_empty() {
        return Err(SepError::Argument("empty battery".into()));
    }
    let mut checks = Vec::with_capacity(battery.len());
    for (index, state) in battery.iter().enumerate() {
        let oracle = oracle_schmidt(state, tol)?;
        let margin = oracle.max_margin();
        let verdicts = Criterion::ALL
            .iter()
            .map(|&c| {
                let v = run_report(state, tol, c, ScanMode::FirstViolation)
                    .ok()
                    .map(|r| r.separable);
                (c, v)
            })
            .collect();
        checks.push(CrossCheck {
            index,
            oracle_separable: oracle.separable,
            margin,
            decisive: !tol.is_indecisive(margin),
            verdicts,
        });
    }

    let mut deciders: Vec<String> = Criterion::ALL
        .iter()
        .map(|c| c.name().to_string())
        .collect();
    deciders.push("oracle".into());
    let answers: Vec<Vec<Option<bool>>> = checks
        .iter()
        .map(|c| {
            let mut row: Vec<Option<bool>> = Criterion::ALL.iter().map(|k| c.verdicts[k]).collect();
            row.push(Some(c.oracle_separable));
            row
        })
        .collect();
    let size = deciders.len();
    let mut agreement = vec![vec![0; size]; size];
    for row in &answers {
        for i in 0..size {
            for j in 0..size {
                if row[i].is_some() && row[i] == row[j] {
                    agreement[i][j] += 1;
                }
            }
        }
    }
    let indecisive = checks
        .iter()
        .filter(|c| !c.decisive)
        .map(|c| c.index)
        .collect();
    let disagreements = checks
        .iter()
        .filter(|c| c.decisive && !c.unanimous())
        .map(|c| c.index)
        .collect();
    Ok(CrossValidation {
        checks,
        deciders,
        agreement,
        indecisive,
        disagreements,
    })
}
