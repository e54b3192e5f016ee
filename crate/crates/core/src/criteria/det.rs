//! det(M_k M_k^dagger - E_k) = 0 for every party k.
//!
//! The reduced density matrix rho_k = M_k M_k^dagger is r x r with trace one,
//! so the determinant vanishes exactly when some eigenvalue equals one, i.e.
//! when rho_k is a rank-one projector. By default the determinant is
//! evaluated from the d_k eigenvalues of M_k^dagger M_k: the remaining
//! r - d_k eigenvalues of rho_k are zero and each contributes a factor -1.
//! The dense path runs LU on the full r x r matrix.

use serde::{Deserialize, Serialize};

use crate::counters::{NoTally, OpTally};
use crate::density::{gram_large, gram_small};
use crate::error::Result;
use crate::linalg::determinant;
use crate::state::{Amplitude, PureState};
use crate::tolerance::ToleranceConfig;
use crate::unfolding::{build_unfolding, ModeUnfolding};

use super::{check_inputs, Criterion, CriterionReport, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetPath {
    #[default]
    Spectral,
    Dense,
}

pub fn det_value_spectral(unf: &ModeUnfolding) -> Result<f64> {
    let eig = gram_small(unf).eigenvalues()?;
    let padding = unf.rows().abs_diff(unf.cols());
    let sign = if padding % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * eig.iter().map(|l| l - 1.0).product::<f64>())
}

/// LU determinant of M_k M_k^dagger - E. Only the determinant evaluation is
/// tallied; forming the Gram matrix belongs to the density module.
pub fn det_value_dense<T: OpTally>(unf: &ModeUnfolding, tally: &mut T) -> Result<f64> {
    let mut shifted = gram_large(unf).matrix;
    let r = shifted.rows();
    for i in 0..r {
        shifted[(i, i)] -= Amplitude::new(1.0, 0.0);
    }
    tally.add(r as u64);
    // Hermitian matrix: the determinant is real up to rounding
    Ok(determinant(&shifted, tally)?.re)
}

pub fn det_report<T: OpTally>(
    state: &PureState,
    tol: &ToleranceConfig,
    path: DetPath,
    tally: &mut T,
) -> Result<CriterionReport> {
    check_inputs(state, tol)?;
    let mut per_party = Vec::with_capacity(state.parties());
    let mut witness = None;
    for k in 0..state.parties() {
        let unf = build_unfolding(state, k)?;
        let value = match path {
            DetPath::Spectral => {
                tally.mul(unf.cols() as u64);
                det_value_spectral(&unf)?
            }
            DetPath::Dense => det_value_dense(&unf, tally)?,
        };
        tally.cmp(1);
        if witness.is_none() && value.abs() > tol.det {
            witness = Some(Witness::Determinant { party: k, value });
        }
        per_party.push(Some(value));
    }
    Ok(CriterionReport {
        criterion: Criterion::Det,
        separable: witness.is_none(),
        per_party,
        witness,
    })
}

pub fn det_criterion(state: &PureState, tol: &ToleranceConfig) -> Result<Verdict> {
    let report = det_report(state, tol, DetPath::Spectral, &mut NoTally)?;
    Verdict::from_reports(state, tol, vec![report])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cat_state, random_product_state, random_state, w_state};
    use crate::state::DimensionProfile;

    #[test]
    fn cat_states_give_one_quarter() {
        let tol = ToleranceConfig::default();
        for n in 2..=6 {
            let cat = cat_state(n, 2).unwrap();
            let v = det_criterion(&cat, &tol).unwrap();
            assert!(!v.separable);
            for value in &v.reports[0].per_party {
                assert!((value.unwrap() - 0.25).abs() < 1e-12, "n={n}: {value:?}");
            }
        }
    }

    #[test]
    fn w3_gives_two_ninths() {
        let tol = ToleranceConfig::default();
        let v = det_criterion(&w_state(3).unwrap(), &tol).unwrap();
        assert!(!v.separable);
        for value in &v.reports[0].per_party {
            assert!((value.unwrap() - 2.0 / 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_states_vanish() {
        let tol = ToleranceConfig::default();
        let p = DimensionProfile::new(&[3, 2, 2]).unwrap();
        for seed in 0..10 {
            let s = random_product_state(&p, seed).unwrap();
            let v = det_criterion(&s, &tol).unwrap();
            assert!(v.separable);
            for value in &v.reports[0].per_party {
                assert!(value.unwrap().abs() <= tol.det);
            }
        }
    }

    #[test]
    fn spectral_matches_dense_including_wide_unfoldings() {
        // dims (3, 2): the unfolding of party 0 is 2 x 3, so r < d_k
        for dims in [vec![3, 2], vec![2, 3, 2], vec![4, 2, 3]] {
            let p = DimensionProfile::new(&dims).unwrap();
            for seed in 0..5 {
                let s = random_state(&p, seed).unwrap();
                for k in 0..dims.len() {
                    let unf = build_unfolding(&s, k).unwrap();
                    let a = det_value_spectral(&unf).unwrap();
                    let b = det_value_dense(&unf, &mut NoTally).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-8 * b.abs().max(1e-300),
                        "{dims:?} k={k}: {a} vs {b}"
                    );
                }
            }
        }
    }
}
