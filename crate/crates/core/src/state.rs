//! Dense n-partite pure states.
//!
//! Amplitudes are stored flat with the last party's index varying fastest:
//! the multi-index (i1, ..., in) lives at `((i1*d2 + i2)*d3 + ...)*dn + in`.
//! Indices are 0-based throughout; error messages also show the 1-based form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SepError};
use crate::tolerance::ToleranceConfig;

pub type Amplitude = Complex64;

/// States whose squared norm is off by more than this are rejected on input
/// instead of being rescaled.
pub const INPUT_NORM_SLACK: f64 = 1e-3;

/// Per-party dimensions (d1, ..., dn) with d = prod(dk) and D = max(dk).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimensionProfile {
    dims: Vec<usize>,
    total: usize,
    max_dim: usize,
}

impl DimensionProfile {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(SepError::Argument("at least one party is required".into()));
        }
        if let Some(k) = dims.iter().position(|&d| d == 0) {
            return Err(SepError::Argument(format!(
                "party {} has dimension 0",
                k + 1
            )));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| SepError::Argument("total dimension overflows".into()))?;
        Ok(Self {
            dims: dims.to_vec(),
            total,
            max_dim: *dims.iter().max().unwrap(),
        })
    }

    /// `n` parties of equal dimension `level`.
    pub fn uniform(n: usize, level: usize) -> Result<Self> {
        Self::new(&vec![level; n])
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    /// d = prod(dk).
    pub fn total(&self) -> usize {
        self.total
    }

    /// D = max(dk).
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Product of the dimensions of the parties after `k`; the flat-index step of party `k`.
    pub fn stride(&self, k: usize) -> usize {
        self.dims[k + 1..].iter().product()
    }

    /// Number of rows of the mode-k unfolding, prod over s != k of ds.
    pub fn complement(&self, k: usize) -> usize {
        self.total / self.dims[k]
    }

    pub fn check_party(&self, k: usize) -> Result<()> {
        if k >= self.parties() {
            return Err(SepError::Argument(format!(
                "party {k} out of range for {} parties (1-based: {})",
                self.parties(),
                k + 1
            )));
        }
        Ok(())
    }

    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.parties() {
            return Err(SepError::Shape {
                expected: format!("{} party indices", self.parties()),
                found: format!("{}", multi.len()),
            });
        }
        let mut flat = 0;
        for (party, (&i, &d)) in multi.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return Err(SepError::Index {
                    party,
                    index: i,
                    dim: d,
                });
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        debug_assert!(flat < self.total);
        let mut multi = vec![0; self.parties()];
        for (slot, &d) in multi.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        multi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    profile: DimensionProfile,
    amplitudes: Vec<Amplitude>,
}

impl PureState {
    /// Wraps amplitudes without rescaling them. Length and finiteness are checked;
    /// normalization is checked where it matters (criteria preconditions).
    pub fn new(profile: DimensionProfile, amplitudes: Vec<Amplitude>) -> Result<Self> {
        if amplitudes.len() != profile.total() {
            return Err(SepError::Shape {
                expected: format!("{} amplitudes", profile.total()),
                found: format!("{}", amplitudes.len()),
            });
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(SepError::Argument(format!("amplitude {i} is not finite")));
        }
        Ok(Self {
            profile,
            amplitudes,
        })
    }

    /// Builds and normalizes in one step.
    pub fn normalized(profile: DimensionProfile, amplitudes: Vec<Amplitude>) -> Result<Self> {
        Self::new(profile, amplitudes)?.normalize()
    }

    /// Accepts externally supplied amplitudes: rescaled (returning `true`) when the
    /// squared norm is within [`INPUT_NORM_SLACK`] of one but not within `tol.norm`,
    /// rejected when further off.
    pub fn from_input(
        profile: DimensionProfile,
        amplitudes: Vec<Amplitude>,
        tol: &ToleranceConfig,
    ) -> Result<(Self, bool)> {
        let state = Self::new(profile, amplitudes)?;
        let deviation = (state.norm_sqr() - 1.0).abs();
        if deviation <= tol.norm {
            Ok((state, false))
        } else if deviation <= INPUT_NORM_SLACK {
            log::warn!("input state off unit norm by {deviation:.3e}; renormalizing");
            Ok((state.normalize()?, true))
        } else {
            Err(SepError::Precondition(format!(
                "squared norm {:.6} deviates from 1 by more than {INPUT_NORM_SLACK}",
                state.norm_sqr()
            )))
        }
    }

    /// Computational basis state |multi>.
    pub fn basis(profile: DimensionProfile, multi: &[usize]) -> Result<Self> {
        let idx = profile.flat_index(multi)?;
        let mut amplitudes = vec![Amplitude::new(0.0, 0.0); profile.total()];
        amplitudes[idx] = Amplitude::new(1.0, 0.0);
        Self::new(profile, amplitudes)
    }

    /// A single-party state from its components.
    pub fn single(components: Vec<Amplitude>) -> Result<Self> {
        let profile = DimensionProfile::new(&[components.len()])?;
        Self::new(profile, components)
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    pub fn dims(&self) -> &[usize] {
        self.profile.dims()
    }

    pub fn parties(&self) -> usize {
        self.profile.parties()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amplitudes
    }

    pub fn amplitude(&self, multi: &[usize]) -> Result<Amplitude> {
        Ok(self.amplitudes[self.profile.flat_index(multi)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: &ToleranceConfig) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol.norm
    }

    pub fn require_normalized(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.is_normalized(tol) {
            Ok(())
        } else {
            Err(SepError::Precondition(format!(
                "state is not normalized (squared norm {:.12})",
                self.norm_sqr()
            )))
        }
    }

    /// Same direction, unit norm. Fails on an (effectively) zero vector.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm > ToleranceConfig::default().zero) {
            return Err(SepError::Degenerate(format!(
                "cannot normalize a vector of norm {norm:e}"
            )));
        }
        Ok(self.map(|a| a / norm))
    }

    /// <self|other> = sum conj(self_i) * other_i.
    pub fn inner_product(&self, other: &PureState) -> Result<Amplitude> {
        if self.profile != other.profile {
            return Err(SepError::Shape {
                expected: format!("dims {:?}", self.dims()),
                found: format!("dims {:?}", other.dims()),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |<self|other>|.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner_product(other)?.norm())
    }

    pub fn scale(&self, factor: Amplitude) -> Self {
        self.map(|a| a * factor)
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        self.scale(Amplitude::from_polar(1.0, theta))
    }

    /// Reorders parties: party `k` of the result is party `perm[k]` of `self`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        let n = self.parties();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(SepError::Argument(format!(
                "{perm:?} is not a permutation of {n} parties"
            )));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims()[p]).collect();
        let profile = DimensionProfile::new(&new_dims)?;
        let mut amplitudes = vec![Amplitude::new(0.0, 0.0); self.amplitudes.len()];
        let mut old = vec![0; n];
        for (flat, slot) in amplitudes.iter_mut().enumerate() {
            let new = profile.multi_index(flat);
            for (k, &p) in perm.iter().enumerate() {
                old[p] = new[k];
            }
            *slot = self.amplitude(&old)?;
        }
        Self::new(profile, amplitudes)
    }

    fn map(&self, f: impl Fn(Amplitude) -> Amplitude) -> Self {
        Self {
            profile: self.profile.clone(),
            amplitudes: self.amplitudes.iter().map(|&a| f(a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    #[test]
    fn flat_index_examples() {
        let p = DimensionProfile::new(&[2, 2]).unwrap();
        assert_eq!(p.flat_index(&[0, 0]).unwrap(), 0);
        assert_eq!(p.flat_index(&[1, 1]).unwrap(), 3);

        // Row order of the amplitude listing: enumerate (i1,i2,i3) with i3 fastest.
        let p = DimensionProfile::new(&[2, 3, 2]).unwrap();
        let mut position = 0;
        let mut found = None;
        for i1 in 0..2 {
            for i2 in 0..3 {
                for i3 in 0..2 {
                    if (i1, i2, i3) == (1, 2, 0) {
                        found = Some(position);
                    }
                    assert_eq!(p.flat_index(&[i1, i2, i3]).unwrap(), position);
                    position += 1;
                }
            }
        }
        assert_eq!(found, Some(10));
        assert_eq!(p.flat_index(&[1, 2, 0]).unwrap(), 10);
    }

    #[test]
    fn flat_index_rejects_out_of_range() {
        let p = DimensionProfile::new(&[2, 3]).unwrap();
        let err = p.flat_index(&[0, 3]).unwrap_err();
        assert!(matches!(
            err,
            SepError::Index {
                party: 1,
                index: 3,
                dim: 3
            }
        ));
        assert!(err.to_string().contains("1-based: party 2"));
        assert!(matches!(p.flat_index(&[0]), Err(SepError::Shape { .. })));
    }

    #[test]
    fn multi_index_inverts_flat_index() {
        let p = DimensionProfile::new(&[3, 1, 4, 2]).unwrap();
        for flat in 0..p.total() {
            assert_eq!(p.flat_index(&p.multi_index(flat)).unwrap(), flat);
        }
    }

    #[test]
    fn profile_rejects_bad_dims() {
        assert!(DimensionProfile::new(&[]).is_err());
        assert!(DimensionProfile::new(&[2, 0]).is_err());
        let p = DimensionProfile::new(&[2, 5, 3]).unwrap();
        assert_eq!((p.total(), p.max_dim()), (30, 5));
    }

    #[test]
    fn normalize_examples() {
        let s = PureState::single(vec![c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(
            s.normalize().unwrap().amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0)]
        );

        let p = DimensionProfile::new(&[2, 2]).unwrap();
        let s = PureState::new(p, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap()
            .normalize()
            .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[3] - c(h, 0.0)).norm() < 1e-15);

        let s = PureState::single(vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)])
            .unwrap()
            .normalize()
            .unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        let third = 1.0 / 3f64.sqrt();
        assert!((s.amplitudes()[1] - c(0.0, third)).norm() < 1e-15);
    }

    #[test]
    fn normalize_zero_vector_is_degenerate() {
        let s = PureState::single(vec![c(0.0, 0.0); 3]).unwrap();
        assert!(matches!(s.normalize(), Err(SepError::Degenerate(_))));
    }

    #[test]
    fn inner_product_basics() {
        let p = DimensionProfile::new(&[2, 2]).unwrap();
        let s00 = PureState::basis(p.clone(), &[0, 0]).unwrap();
        let s11 = PureState::basis(p.clone(), &[1, 1]).unwrap();
        assert_eq!(s00.inner_product(&s11).unwrap(), c(0.0, 0.0));
        assert_eq!(s00.inner_product(&s00).unwrap(), c(1.0, 0.0));

        let other = PureState::basis(DimensionProfile::new(&[4]).unwrap(), &[0]).unwrap();
        assert!(matches!(
            s00.inner_product(&other),
            Err(SepError::Shape { .. })
        ));
    }

    #[test]
    fn input_normalization_rules() {
        let tol = ToleranceConfig::default();
        let p = DimensionProfile::new(&[2]).unwrap();
        let (s, rescaled) =
            PureState::from_input(p.clone(), vec![c(1.0, 0.0), c(0.0, 0.0)], &tol).unwrap();
        assert!(!rescaled && s.is_normalized(&tol));

        let (s, rescaled) =
            PureState::from_input(p.clone(), vec![c(1.0001, 0.0), c(0.0, 0.0)], &tol).unwrap();
        assert!(rescaled && s.is_normalized(&tol));

        assert!(PureState::from_input(p, vec![c(1.1, 0.0), c(0.0, 0.0)], &tol).is_err());
    }

    #[test]
    fn non_finite_amplitudes_rejected() {
        let p = DimensionProfile::new(&[2]).unwrap();
        assert!(PureState::new(p, vec![c(f64::NAN, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn permute_parties_moves_indices() {
        let p = DimensionProfile::new(&[2, 3]).unwrap();
        let s = PureState::basis(p, &[1, 2]).unwrap();
        let t = s.permute_parties(&[1, 0]).unwrap();
        assert_eq!(t.dims(), &[3, 2]);
        assert_eq!(t.amplitude(&[2, 1]).unwrap(), c(1.0, 0.0));
        assert!(s.permute_parties(&[0, 0]).is_err());
    }
}
