//! Reduced density matrices of one-party cuts.
//!
//! Tracing party k out of |psi><psi| gives the r x r matrix M_k M_k^dagger.
//! The d_k x d_k matrix M_k^dagger M_k has the same nonzero spectrum and is
//! what the criteria diagonalize.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SepError};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::state::{Amplitude, PureState};
use crate::tolerance::ToleranceConfig;
use crate::unfolding::ModeUnfolding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityOrigin {
    GramLarge,
    GramSmall,
    PartialTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub party: usize,
    pub origin: DensityOrigin,
    pub matrix: CMatrix,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Hermitian within 1e-12, unit trace within `tol.norm`, eigenvalues >= -1e-10.
    pub fn validate(&self, tol: &ToleranceConfig) -> Result<()> {
        let defect = self.matrix.hermitian_defect();
        if defect > 1e-12 {
            return Err(SepError::numerical(format!(
                "reduced density matrix not Hermitian (defect {defect:e})"
            )));
        }
        let trace = self.matrix.trace();
        if (trace.re - 1.0).abs() > tol.norm || trace.im.abs() > tol.norm {
            return Err(SepError::numerical(format!(
                "reduced density matrix trace {trace} differs from 1"
            )));
        }
        let min = self.eigenvalues()?.last().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(SepError::numerical(format!(
                "reduced density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }
}

/// M_k M_k^dagger (r x r).
pub fn gram_large(unf: &ModeUnfolding) -> ReducedDensity {
    let m = unf.matrix();
    let r = m.rows();
    let mut g = CMatrix::zeros(r, r);
    for p in 0..r {
        for q in 0..=p {
            let v: Amplitude = m
                .row(p)
                .iter()
                .zip(m.row(q))
                .map(|(a, b)| a * b.conj())
                .sum();
            g[(p, q)] = v;
            g[(q, p)] = v.conj();
        }
    }
    ReducedDensity {
        party: unf.party(),
        origin: DensityOrigin::GramLarge,
        matrix: g,
    }
}

/// M_k^dagger M_k (d_k x d_k).
pub fn gram_small(unf: &ModeUnfolding) -> ReducedDensity {
    let m = unf.matrix();
    let c = m.cols();
    let mut g = CMatrix::zeros(c, c);
    for row in 0..m.rows() {
        let entries = m.row(row);
        for s in 0..c {
            let conj_s = entries[s].conj();
            for t in 0..c {
                g[(s, t)] += conj_s * entries[t];
            }
        }
    }
    ReducedDensity {
        party: unf.party(),
        origin: DensityOrigin::GramSmall,
        matrix: g,
    }
}

/// Traces party `k` out of |psi><psi| directly from the amplitudes, without
/// forming the d x d projector. Row/column order of the result is the
/// complement multi-index with the last party fastest.
pub fn partial_trace(state: &PureState, k: usize) -> Result<ReducedDensity> {
    let profile = state.profile();
    profile.check_party(k)?;
    let dk = profile.dim(k);
    let r = profile.complement(k);
    let amps = state.amplitudes();

    // flat index of |rest_i>|j_k> for every complement index i
    let mut offsets = Vec::with_capacity(r);
    let mut multi = vec![0usize; profile.parties()];
    for i in 0..r {
        let mut rest = i;
        for s in (0..profile.parties()).rev() {
            if s == k {
                multi[s] = 0;
                continue;
            }
            multi[s] = rest % profile.dim(s);
            rest /= profile.dim(s);
        }
        offsets.push(profile.flat_index(&multi)?);
    }
    let step = profile.stride(k);

    let mut rho = CMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let mut sum = Amplitude::new(0.0, 0.0);
            for traced in 0..dk {
                sum += amps[offsets[i] + traced * step] * amps[offsets[j] + traced * step].conj();
            }
            rho[(i, j)] = sum;
        }
    }
    Ok(ReducedDensity {
        party: k,
        origin: DensityOrigin::PartialTrace,
        matrix: rho,
    })
}
