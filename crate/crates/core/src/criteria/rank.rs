//! Every unfolding M_k has rank one: sigma2/sigma1 <= tol.rank, with the
//! singular values taken as square roots of the eigenvalues of M_k^dagger M_k.

use crate::counters::{NoTally, OpTally};
use crate::density::gram_small;
use crate::error::Result;
use crate::state::PureState;
use crate::tolerance::ToleranceConfig;
use crate::unfolding::{build_unfolding, ModeUnfolding};

use super::{check_inputs, Criterion, CriterionReport, Verdict, Witness};

/// Singular values of M_k, descending.
pub fn singular_values(unf: &ModeUnfolding) -> Result<Vec<f64>> {
    Ok(gram_small(unf)
        .eigenvalues()?
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect())
}

/// sigma2 / sigma1 (zero when there is a single column).
pub fn rank_ratio(unf: &ModeUnfolding) -> Result<f64> {
    let sv = singular_values(unf)?;
    Ok(match sv.as_slice() {
        [s1, s2, ..] if *s1 > 0.0 => s2 / s1,
        _ => 0.0,
    })
}

pub fn rank_report<T: OpTally>(
    state: &PureState,
    tol: &ToleranceConfig,
    tally: &mut T,
) -> Result<CriterionReport> {
    check_inputs(state, tol)?;
    let mut per_party = Vec::with_capacity(state.parties());
    let mut witness = None;
    for k in 0..state.parties() {
        let ratio = rank_ratio(&build_unfolding(state, k)?)?;
        tally.cmp(1);
        if witness.is_none() && ratio > tol.rank {
            witness = Some(Witness::RankRatio { party: k, ratio });
        }
        per_party.push(Some(ratio));
    }
    Ok(CriterionReport {
        criterion: Criterion::Rank,
        separable: witness.is_none(),
        per_party,
        witness,
    })
}

pub fn rank_criterion(state: &PureState, tol: &ToleranceConfig) -> Result<Verdict> {
    let report = rank_report(state, tol, &mut NoTally)?;
    Verdict::from_reports(state, tol, vec![report])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cat_state, perturb, random_product_state};
    use crate::state::DimensionProfile;

    #[test]
    fn cat2_has_equal_singular_values() {
        let tol = ToleranceConfig::default();
        let cat = cat_state(2, 2).unwrap();
        let sv = singular_values(&build_unfolding(&cat, 0).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sv[0] - h).abs() < 1e-14 && (sv[1] - h).abs() < 1e-14);
        let v = rank_criterion(&cat, &tol).unwrap();
        assert!(!v.separable);
        assert!((v.reports[0].per_party[0].unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_ratio_is_tiny() {
        let tol = ToleranceConfig::default();
        let p = DimensionProfile::new(&[2, 4, 3]).unwrap();
        let s = random_product_state(&p, 8).unwrap();
        let v = rank_criterion(&s, &tol).unwrap();
        assert!(v.separable);
        assert!(v.reports[0].per_party.iter().all(|r| r.unwrap() < 1e-7));
    }

    #[test]
    fn ratio_grows_with_perturbation() {
        let p = DimensionProfile::new(&[2, 2, 2]).unwrap();
        let base = PureState::basis(p, &[0, 0, 0]).unwrap();
        let cat = cat_state(3, 2).unwrap();
        let mut last = 0.0;
        for exp in [-12, -10, -8, -6, -4, -2] {
            let eps = 10f64.powi(exp);
            let s = perturb(&base, &cat, eps).unwrap();
            let ratio = rank_ratio(&build_unfolding(&s, 0).unwrap()).unwrap();
            assert!(ratio >= last, "eps={eps}: {ratio} < {last}");
            last = ratio;
        }
        assert!(last > 1e-3);
    }
}
