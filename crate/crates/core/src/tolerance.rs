use serde::{Deserialize, Serialize};

use crate::error::{Result, SepError};

/// Thresholds that turn exact zero-tests into floating-point decisions.
///
/// `rank` is the governing threshold: a party is rank-deficient when
/// sigma2/sigma1 of its unfolding is at most `rank`. The minor and column
/// tests compare products of two amplitudes against `rank` (amplitudes have
/// unit norm, so the largest 2x2 minor is at most sigma1*sigma2), and the
/// determinant test compares |det(rho - E)|, which behaves like sigma2^2,
/// against `det`, so `det` defaults to `rank^2`. `zero` only decides whether
/// a single entry counts as zero when pruning rows and columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub norm: f64,
    pub zero: f64,
    pub det: f64,
    pub rank: f64,
    pub fid: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            norm: 1e-9,
            zero: 1e-12,
            det: 1e-14,
            rank: 1e-7,
            fid: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("norm", self.norm),
            ("zero", self.zero),
            ("det", self.det),
            ("rank", self.rank),
            ("fid", self.fid),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SepError::Argument(format!(
                    "tolerance {name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Sets the rank threshold and the determinant threshold tied to it.
    pub fn with_rank(mut self, rank: f64) -> Self {
        self.rank = rank;
        self.det = rank * rank;
        self
    }

    /// `value` lies inside the band [rank/10, rank*10] where floating point may
    /// legitimately straddle the rank threshold.
    pub fn is_indecisive(&self, margin: f64) -> bool {
        margin >= self.rank / 10.0 && margin <= self.rank * 10.0
    }
}
