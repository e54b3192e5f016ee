//! Recovers the single-party factors of a separable state.
//!
//! Every row of a rank-one M_k is a multiple of the party-k factor, so the
//! largest-norm row, normalized, is that factor up to phase. The leftover
//! global phase is folded into the first factor so that the overlap of the
//! reconstruction with the state is real and positive.

use crate::error::{Result, SepError};
use crate::generators::product_state;
use crate::state::PureState;
use crate::tolerance::ToleranceConfig;
use crate::unfolding::build_unfolding;

use super::rank::rank_report;

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub factors: Vec<PureState>,
    /// |<product of factors|psi>|
    pub fidelity: f64,
}

/// Factors of a state the rank criterion calls separable.
pub fn extract_factors(state: &PureState, tol: &ToleranceConfig) -> Result<Factorization> {
    let report = rank_report(state, tol, &mut crate::counters::NoTally)?;
    if !report.separable {
        return Err(SepError::Logic(
            "factor extraction requested for an entangled state".into(),
        ));
    }
    factors_from_rows(state, tol)
}

pub(crate) fn factors_from_rows(state: &PureState, tol: &ToleranceConfig) -> Result<Factorization> {
    let mut factors = Vec::with_capacity(state.parties());
    for k in 0..state.parties() {
        let unf = build_unfolding(state, k)?;
        let m = unf.matrix();
        let (mut best_row, mut best) = (0, -1.0);
        for i in 0..m.rows() {
            let norm: f64 = m.row(i).iter().map(|a| a.norm_sqr()).sum();
            if norm > best {
                (best_row, best) = (i, norm);
            }
        }
        factors.push(PureState::single(m.row(best_row).to_vec())?.normalize()?);
    }
    let overlap = product_state(&factors, tol)?.inner_product(state)?;
    let fidelity = overlap.norm();
    if fidelity > 0.0 {
        factors[0] = factors[0].scale(overlap / fidelity);
    }
    if fidelity < 1.0 - tol.fid {
        return Err(SepError::Numerical {
            message: format!("reconstructed product state has fidelity {fidelity:.15}"),
            fidelity: Some(fidelity),
        });
    }
    Ok(Factorization { factors, fidelity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cat_state, random_product_with_factors};
    use crate::state::{Amplitude, DimensionProfile};

    #[test]
    fn basis_product_factors() {
        let tol = ToleranceConfig::default();
        let p = DimensionProfile::new(&[2, 2]).unwrap();
        let s = PureState::basis(p, &[0, 1]).unwrap();
        let f = extract_factors(&s, &tol).unwrap();
        let one = Amplitude::new(1.0, 0.0);
        let zero = Amplitude::new(0.0, 0.0);
        assert_eq!(f.factors[0].amplitudes(), &[one, zero]);
        assert_eq!(f.factors[1].amplitudes(), &[zero, one]);
        assert_eq!(f.fidelity, 1.0);
    }

    #[test]
    fn zero_first_row_still_recovered() {
        // |1>|0>: row 0 of M_1 (i2 = 0) is (0, 1), row 1 is zero
        let tol = ToleranceConfig::default();
        let p = DimensionProfile::new(&[2, 2]).unwrap();
        let s = PureState::basis(p, &[1, 0]).unwrap();
        let f = extract_factors(&s, &tol).unwrap();
        assert_eq!(f.factors[0].amplitudes()[1], Amplitude::new(1.0, 0.0));
        assert_eq!(f.factors[1].amplitudes()[0], Amplitude::new(1.0, 0.0));
    }

    #[test]
    fn random_factors_match_up_to_phase() {
        let tol = ToleranceConfig::default();
        let p = DimensionProfile::new(&[3, 2, 4]).unwrap();
        for seed in 0..20 {
            let (s, truth) = random_product_with_factors(&p, seed).unwrap();
            let f = extract_factors(&s, &tol).unwrap();
            assert!(f.fidelity >= 1.0 - 1e-9);
            for (got, want) in f.factors.iter().zip(&truth) {
                assert!(got.fidelity(want).unwrap() >= 1.0 - 1e-12);
            }
            let overlap = product_state(&f.factors, &tol)
                .unwrap()
                .inner_product(&s)
                .unwrap();
            assert!(overlap.im.abs() < 1e-14 && overlap.re > 0.0);
        }
    }

    #[test]
    fn entangled_state_is_a_logic_error() {
        let tol = ToleranceConfig::default();
        assert!(matches!(
            extract_factors(&cat_state(3, 2).unwrap(), &tol),
            Err(SepError::Logic(_))
        ));
    }
}
