//! Symplectic linear algebra: the standard form matrix J, symplectic checks,
//! free generators, the Cayley-type map and matrix factorizations.
//!
//! Conventions: phase-space points are z = (x, p), the symplectic form is
//! sigma(z, z') = <Jz, z'> with J = [0 I; -I 0], and a 2n x 2n matrix S is
//! symplectic when S^T J S = J.

mod cayley;
mod generator;
mod random;
mod split;

pub use cayley::{cayley_m, inverse_cayley, CayleySymmetric, MwDescriptor};
pub use generator::FreeGenerator;
pub use random::{derive_seed, random_free, random_symplectic};
pub use split::{split_into_free_pair, split_into_free_pair_variant};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{self, TOL_SYMP};

/// Largest absolute entry of a matrix.
pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

/// Max-norm symmetry defect ||M - M^T||.
pub(crate) fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// The standard symplectic matrix J = [0 I; -I 0] of half-dimension n.
pub fn standard_j(n: usize) -> SymplecticMatrix {
    assert!(n >= 1, "half-dimension must be positive");
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = 1.0;
        m[(n + i, i)] = -1.0;
    }
    SymplecticMatrix { n, mat: m }
}

/// Raw J matrix without the wrapper (handy for quadratic-form arithmetic).
pub(crate) fn j_matrix(n: usize) -> DMatrix<f64> {
    standard_j(n).into_matrix()
}

/// Check ||S^T J S - J||_max <= tol. Errors on odd-dimensional input.
pub fn is_symplectic(mat: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if !mat.is_square() {
        return Err(Error::Dimension(format!(
            "expected square matrix, got {}x{}",
            mat.nrows(),
            mat.ncols()
        )));
    }
    if mat.nrows() % 2 != 0 {
        return Err(Error::Dimension(format!(
            "expected even dimension, got {}",
            mat.nrows()
        )));
    }
    Ok(symplectic_defect(mat) <= tol)
}

/// ||S^T J S - J||_max for an even-dimensional square matrix.
pub fn symplectic_defect(mat: &DMatrix<f64>) -> f64 {
    let n = mat.nrows() / 2;
    let j = j_matrix(n);
    max_abs(&(mat.transpose() * &j * mat - &j))
}

/// A real 2n x 2n matrix preserving the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    mat: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Validates the symplectic condition at the default tolerance.
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        Self::with_tol(mat, tolerances::SYMPLECTIC_RESIDUAL)
    }

    /// Validates ||S^T J S - J||_max <= tol.
    pub fn with_tol(mat: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !is_symplectic(&mat, tol)? {
            return Err(Error::NotSymplectic {
                defect: symplectic_defect(&mat),
                tol,
            });
        }
        Ok(Self {
            n: mat.nrows() / 2,
            mat,
        })
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Upper-left n x n block.
    pub fn block_a(&self) -> DMatrix<f64> {
        self.mat.view((0, 0), (self.n, self.n)).into_owned()
    }

    /// Upper-right n x n block.
    pub fn block_b(&self) -> DMatrix<f64> {
        self.mat.view((0, self.n), (self.n, self.n)).into_owned()
    }

    /// Lower-left n x n block.
    pub fn block_c(&self) -> DMatrix<f64> {
        self.mat.view((self.n, 0), (self.n, self.n)).into_owned()
    }

    /// Lower-right n x n block.
    pub fn block_d(&self) -> DMatrix<f64> {
        self.mat.view((self.n, self.n), (self.n, self.n)).into_owned()
    }

    /// Symplectic inverse S^{-1} = -J S^T J, exact up to rounding.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = j_matrix(self.n);
        let inv = -(&j * self.mat.transpose() * &j);
        SymplecticMatrix { n: self.n, mat: inv }
    }

    /// Product of two symplectic matrices of the same half-dimension.
    pub fn compose(&self, rhs: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.n != rhs.n {
            return Err(Error::Dimension(format!(
                "half-dimension mismatch: {} vs {}",
                self.n, rhs.n
            )));
        }
        Ok(SymplecticMatrix {
            n: self.n,
            mat: &self.mat * &rhs.mat,
        })
    }

    pub fn det(&self) -> f64 {
        self.mat.determinant()
    }

    /// det(S - I); vanishes exactly when S has eigenvalue 1.
    pub fn det_minus_identity(&self) -> f64 {
        let d = self.dim();
        (&self.mat - DMatrix::identity(d, d)).determinant()
    }

    /// Whether |det(S - I)| clears the scaled degeneracy threshold.
    pub fn is_fixed_point_free(&self) -> bool {
        tolerances::clears_det_tol(self.det_minus_identity(), max_abs(&self.mat))
    }

    /// The generator of a free matrix: P = D B^{-1}, L = B^{-1}, Q = B^{-1} A.
    ///
    /// Errors with [`Error::NotFree`] when the upper-right block is singular.
    pub fn free_generator(&self) -> Result<FreeGenerator> {
        let b = self.block_b();
        let det_b = b.determinant();
        if !tolerances::clears_det_tol(det_b, max_abs(&b)) {
            return Err(Error::NotFree { det_b });
        }
        let b_inv = b
            .try_inverse()
            .ok_or(Error::NotFree { det_b })?;
        let p = self.block_d() * &b_inv;
        let q = &b_inv * self.block_a();
        // roundoff symmetrization; the defect is checked by the constructor
        let p = (&p + p.transpose()) * 0.5;
        let q = (&q + q.transpose()) * 0.5;
        FreeGenerator::new(p, b_inv, q)
    }

    /// Whether the upper-right block is invertible.
    pub fn is_free(&self) -> bool {
        let b = self.block_b();
        tolerances::clears_det_tol(b.determinant(), max_abs(&b).max(max_abs(&self.mat)))
    }

    pub fn apply(&self, z: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
        &self.mat * z
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    rows: Vec<Vec<f64>>,
}

pub(crate) fn rows_of(mat: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..mat.nrows())
        .map(|i| mat.row(i).iter().copied().collect())
        .collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    if r == 0 || rows.iter().any(|row| row.len() != rows[0].len()) {
        return Err(Error::Dimension("ragged or empty row data".into()));
    }
    let c = rows[0].len();
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

impl Serialize for SymplecticMatrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile {
            n: self.n,
            rows: rows_of(&self.mat),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SymplecticMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(de)?;
        let mat = matrix_from_rows(&file.rows).map_err(serde::de::Error::custom)?;
        if mat.nrows() != 2 * file.n || mat.ncols() != 2 * file.n {
            return Err(serde::de::Error::custom(format!(
                "expected {0}x{0} entries for n = {1}",
                2 * file.n,
                file.n
            )));
        }
        SymplecticMatrix::with_tol(mat, TOL_SYMP.max(1e-8)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn standard_j_n1_matches_block_form() {
        let j = standard_j(1);
        let expect = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(j.matrix(), &expect);
        assert!(is_symplectic(j.matrix(), 1e-12).unwrap());
    }

    #[test]
    fn j_squared_is_minus_identity() {
        let j = standard_j(1);
        let j2 = j.compose(&j).unwrap();
        let expect = -DMatrix::identity(2, 2);
        assert_abs_diff_eq!(max_abs(&(j2.matrix() - expect)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn j_transpose_is_minus_j() {
        let j = standard_j(2);
        assert_abs_diff_eq!(
            max_abs(&(j.matrix().transpose() + j.matrix())),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn identity_and_j_are_symplectic() {
        assert!(is_symplectic(&DMatrix::identity(2, 2), 1e-10).unwrap());
        assert!(is_symplectic(standard_j(1).matrix(), 1e-10).unwrap());
    }

    #[test]
    fn diagonal_stretch_is_not_symplectic() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!(!is_symplectic(&s, 1e-10).unwrap());
    }

    #[test]
    fn odd_dimension_is_rejected() {
        let m = DMatrix::<f64>::identity(3, 3);
        assert!(matches!(is_symplectic(&m, 1e-10), Err(Error::Dimension(_))));
    }

    #[test]
    fn symplectic_inverse_matches_lu_inverse() {
        let s = random_symplectic(2, 7, 3).unwrap();
        let inv = s.inverse();
        let prod = s.compose(&inv).unwrap();
        let eye = DMatrix::identity(4, 4);
        assert!(max_abs(&(prod.matrix() - eye)) < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let s = random_symplectic(2, 3, 2).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: SymplecticMatrix = serde_json::from_str(&text).unwrap();
        assert!(max_abs(&(s.matrix() - back.matrix())) < 1e-15);
    }
}
