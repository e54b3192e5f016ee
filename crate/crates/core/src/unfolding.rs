//! Mode-k unfoldings M_k: an r x d_k matrix with r = prod over s != k of d_s.
//!
//! Column c holds i_k = c. Rows run over the complement multi-index
//! (i_1, ..., i_{k-1}, i_{k+1}, ..., i_n) in lexicographic order with i_n
//! fastest, so row = hi * stride_k + lo where hi indexes the parties before k
//! and lo the parties after it.

use crate::error::{Result, SepError};
use crate::linalg::CMatrix;
use crate::state::{DimensionProfile, PureState};

#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnfolding {
    party: usize,
    profile: DimensionProfile,
    matrix: CMatrix,
}

impl ModeUnfolding {
    pub fn party(&self) -> usize {
        self.party
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    /// Flat amplitude index of entry (row, col).
    pub fn flat_index(&self, row: usize, col: usize) -> usize {
        let stride = self.profile.stride(self.party);
        let (hi, lo) = (row / stride, row % stride);
        (hi * self.cols() + col) * stride + lo
    }

    /// Complement multi-index (party k omitted) of a row.
    pub fn row_multi_index(&self, row: usize) -> Vec<usize> {
        let mut full = self.profile.multi_index(self.flat_index(row, 0));
        full.remove(self.party);
        full
    }

    /// Scatters the entries back into a flat amplitude vector.
    pub fn fold(&self) -> Vec<crate::state::Amplitude> {
        let mut out = vec![crate::state::Amplitude::new(0.0, 0.0); self.profile.total()];
        for row in 0..self.rows() {
            for col in 0..self.cols() {
                out[self.flat_index(row, col)] = self.matrix[(row, col)];
            }
        }
        out
    }
}

pub fn build_unfolding(state: &PureState, k: usize) -> Result<ModeUnfolding> {
    let profile = state.profile();
    profile.check_party(k)?;
    let cols = profile.dim(k);
    let stride = profile.stride(k);
    let rows = profile.complement(k);
    let amps = state.amplitudes();
    let mut data = Vec::with_capacity(profile.total());
    for row in 0..rows {
        let base = (row / stride) * cols * stride + row % stride;
        data.extend((0..cols).map(|c| amps[base + c * stride]));
    }
    Ok(ModeUnfolding {
        party: k,
        profile: profile.clone(),
        matrix: CMatrix::from_vec(rows, cols, data),
    })
}

pub fn build_all(state: &PureState) -> Vec<ModeUnfolding> {
    (0..state.parties())
        .map(|k| build_unfolding(state, k).expect("party in range"))
        .collect()
}

/// An unfolding with its all-zero rows and columns removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PrunedUnfolding {
    pub matrix: CMatrix,
    pub kept_rows: Vec<usize>,
    pub kept_cols: Vec<usize>,
}

/// Drops every row and column whose entries all have modulus <= `zero`.
pub fn prune(unf: &ModeUnfolding, zero: f64) -> Result<PrunedUnfolding> {
    let m = unf.matrix();
    let mut row_live = vec![false; m.rows()];
    let mut col_live = vec![false; m.cols()];
    for (i, live) in row_live.iter_mut().enumerate() {
        for (j, entry) in m.row(i).iter().enumerate() {
            if entry.norm() > zero {
                *live = true;
                col_live[j] = true;
            }
        }
    }
    let kept_rows: Vec<usize> = (0..m.rows()).filter(|&i| row_live[i]).collect();
    let kept_cols: Vec<usize> = (0..m.cols()).filter(|&j| col_live[j]).collect();
    if kept_rows.is_empty() {
        return Err(SepError::Degenerate(format!(
            "unfolding of party {} has no entry above {zero:e}",
            unf.party() + 1
        )));
    }
    let data = kept_rows
        .iter()
        .flat_map(|&i| kept_cols.iter().map(move |&j| m[(i, j)]))
        .collect();
    Ok(PrunedUnfolding {
        matrix: CMatrix::from_vec(kept_rows.len(), kept_cols.len(), data),
        kept_rows,
        kept_cols,
    })
}
