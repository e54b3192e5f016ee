//! Small dense complex matrices: Hermitian eigenvalues by cyclic Jacobi and
//! determinants by LU with partial pivoting.

use std::ops::{Index, IndexMut};

use crate::counters::OpTally;
use crate::error::{Result, SepError};
use crate::state::Amplitude;

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Amplitude>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Amplitude::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Amplitude::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Amplitude>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Amplitude>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_vec(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Amplitude] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Amplitude] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = Amplitude> + '_ {
        (0..self.rows).map(move |i| self[(i, j)])
    }

    pub fn to_rows(&self) -> Vec<Vec<Amplitude>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> Amplitude {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |a_ij - conj(a_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = if self.rows == self.cols {
            0.0
        } else {
            f64::INFINITY
        };
        for i in 0..self.rows.min(self.cols) {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Amplitude;
    fn index(&self, (i, j): (usize, usize)) -> &Amplitude {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Amplitude {
        &mut self.data[i * self.cols + j]
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted in descending order.
///
/// Each rotation first removes the phase of a_pq with a diagonal unitary and
/// then applies the real symmetric rotation that annihilates it. Sweeps stop
/// once the off-diagonal Frobenius norm is below machine precision relative
/// to the whole matrix (and in any case below 1e-12).
pub fn hermitian_eigenvalues(matrix: &CMatrix) -> Result<Vec<f64>> {
    let n = matrix.rows();
    if n != matrix.cols() {
        return Err(SepError::Shape {
            expected: "square matrix".into(),
            found: format!("{}x{}", matrix.rows(), matrix.cols()),
        });
    }
    let mut a = matrix.clone();
    // enforce exact Hermitian symmetry from the lower triangle
    for i in 0..n {
        a[(i, i)] = Amplitude::new(a[(i, i)].re, 0.0);
        for j in 0..i {
            a[(j, i)] = a[(i, j)].conj();
        }
    }
    let scale = a.frobenius_sqr().sqrt();
    let target = (f64::EPSILON * scale).min(1e-12);

    let off_norm = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(SepError::numerical(format!(
                "Jacobi eigenvalue iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = Amplitude::new(0.0, 0.0);
                    a[(q, p)] = Amplitude::new(0.0, 0.0);
                    continue;
                }
                // D = diag(..., e^{-i phi} at q, ...) makes a_pq real and positive
                let phase = apq / mag;
                for k in 0..n {
                    a[(k, q)] *= phase.conj();
                    a[(q, k)] *= phase;
                }
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = akp * c - akq * s;
                    let new_kq = akp * s + akq * c;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp.conj();
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq.conj();
                }
                a[(p, p)] = Amplitude::new(app - t * mag, 0.0);
                a[(q, q)] = Amplitude::new(aqq + t * mag, 0.0);
                a[(p, q)] = Amplitude::new(0.0, 0.0);
                a[(q, p)] = Amplitude::new(0.0, 0.0);
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Determinant by Gaussian elimination with partial pivoting.
///
/// Tally: one comparison per pivot candidate, one multiplication per
/// multiplier (a division), one multiplication and one addition per updated
/// entry, and one multiplication per diagonal factor of the final product.
pub fn determinant<T: OpTally>(matrix: &CMatrix, tally: &mut T) -> Result<Amplitude> {
    let n = matrix.rows();
    if n != matrix.cols() {
        return Err(SepError::Shape {
            expected: "square matrix".into(),
            found: format!("{}x{}", matrix.rows(), matrix.cols()),
        });
    }
    let mut a = matrix.clone();
    let mut det = Amplitude::new(1.0, 0.0);
    for j in 0..n {
        let mut pivot = j;
        let mut best = a[(j, j)].norm();
        for i in j + 1..n {
            let m = a[(i, j)].norm();
            if m > best {
                best = m;
                pivot = i;
            }
        }
        tally.cmp((n - j) as u64);
        if best == 0.0 {
            return Ok(Amplitude::new(0.0, 0.0));
        }
        if pivot != j {
            for k in 0..n {
                a.data.swap(j * n + k, pivot * n + k);
            }
            det = -det;
        }
        let diag = a[(j, j)];
        for i in j + 1..n {
            let factor = a[(i, j)] / diag;
            for k in j + 1..n {
                let update = factor * a[(j, k)];
                a[(i, k)] -= update;
            }
        }
        let below = (n - j - 1) as u64;
        tally.mul(below + below * below);
        tally.add(below * below);
    }
    for i in 0..n {
        det *= a[(i, i)];
    }
    tally.mul(n as u64);
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counters::{NoTally, OpCounters};

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    #[test]
    fn jacobi_diagonal_input() {
        let m = CMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.25, 0.0)],
        ]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![0.5, 0.25]);
    }

    #[test]
    fn jacobi_complex_2x2() {
        // [[2, i],[-i, 2]] has eigenvalues 3 and 1
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ]);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] - 3.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_rank_one_projector() {
        let v = [c(0.5, 0.1), c(-0.3, 0.7), c(0.2, -0.2), c(0.1, 0.0)];
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let mut m = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = v[i] * v[j].conj() / (norm * norm);
            }
        }
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14);
        for &x in &e[1..] {
            assert!(x.abs() < 1e-15);
        }
    }

    #[test]
    fn jacobi_rejects_rectangular() {
        assert!(hermitian_eigenvalues(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn lu_determinant_small() {
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        // cofactor expansion: 0*(i*1 - 0) - 2*(1 - 0) + 1*(0 - 3i) = -2 - 3i
        let d = determinant(&m, &mut NoTally).unwrap();
        assert!((d - c(-2.0, -3.0)).norm() < 1e-14);
        assert_eq!(
            determinant(&CMatrix::zeros(3, 3), &mut NoTally).unwrap(),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn lu_tally_is_two_thirds_cubed_plus_linear() {
        for n in [1usize, 2, 5, 8, 16] {
            let mut m = CMatrix::identity(n);
            m[(n - 1, 0)] = c(0.5, 0.0);
            let mut t = OpCounters::default();
            determinant(&m, &mut t).unwrap();
            let n = n as u64;
            // sum over pivots of (m+1) + m + 2m^2, m = rows below, plus n for the product
            assert_eq!(t.total(), (2 * n * n * n + n) / 3 + n);
        }
    }
}
