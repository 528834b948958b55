//! The Cayley-type map between fixed-point-free symplectic matrices and real
//! symmetric matrices, and the descriptor (S, nu) of the associated
//! Gaussian-weighted phase-space integral operator.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{j_matrix, matrix_from_rows, max_abs, rows_of, symmetry_defect, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::index::IndexMod4;
use crate::tolerances::{self, CAYLEY_SYMMETRY};

/// A real symmetric 2n x 2n matrix in the image of the Cayley-type map
/// M_S = J (S + I)(S - I)^{-1} / 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleySymmetric {
    n: usize,
    mat: DMatrix<f64>,
}

impl CayleySymmetric {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        if !mat.is_square() || mat.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "expected even square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let defect = symmetry_defect(&mat);
        if defect > CAYLEY_SYMMETRY.max(1e-9 * max_abs(&mat)) {
            return Err(Error::Symmetry {
                defect,
                tol: CAYLEY_SYMMETRY,
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

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Sum of two Cayley matrices of the same half-dimension.
    pub fn add(&self, rhs: &CayleySymmetric) -> Result<CayleySymmetric> {
        if self.n != rhs.n {
            return Err(Error::Dimension(format!(
                "half-dimension mismatch: {} vs {}",
                self.n, rhs.n
            )));
        }
        Ok(CayleySymmetric {
            n: self.n,
            mat: &self.mat + &rhs.mat,
        })
    }
}

/// M_S = J (S + I)(S - I)^{-1} / 2; symmetric exactly when S is symplectic.
///
/// Errors with [`Error::FixedPoint`] when det(S - I) is below threshold.
pub fn cayley_m(s: &SymplecticMatrix) -> Result<CayleySymmetric> {
    let dim = s.dim();
    let eye = DMatrix::identity(dim, dim);
    let s_minus = s.matrix() - &eye;
    let det = s_minus.determinant();
    if !tolerances::clears_det_tol(det, max_abs(s.matrix())) {
        return Err(Error::FixedPoint { det });
    }
    let inv = s_minus.try_inverse().ok_or(Error::FixedPoint { det })?;
    let m = 0.5 * j_matrix(s.half_dim()) * (s.matrix() + &eye) * inv;
    // symmetric up to roundoff by the symplectic condition
    let m = 0.5 * (&m + m.transpose());
    CayleySymmetric::new(m)
}

/// Inverse map S = (M - J/2)^{-1}(M + J/2); symplectic for real symmetric M.
///
/// Errors with [`Error::CayleyDomain`] when M - J/2 is singular.
pub fn inverse_cayley(m: &CayleySymmetric) -> Result<SymplecticMatrix> {
    let half_j = 0.5 * j_matrix(m.half_dim());
    let lhs = m.matrix() - &half_j;
    let det = lhs.determinant();
    if !tolerances::clears_det_tol(det, max_abs(m.matrix()).max(1.0)) {
        return Err(Error::CayleyDomain { det });
    }
    let inv = lhs.try_inverse().ok_or(Error::CayleyDomain { det })?;
    let s = inv * (m.matrix() + &half_j);
    SymplecticMatrix::with_tol(s, 1e-8)
}

/// Descriptor (S, nu mod 4) of the Gaussian-weighted phase-space integral
/// operator, with the Cayley matrix and det(S - I) cached.
#[derive(Debug, Clone, PartialEq)]
pub struct MwDescriptor {
    s: SymplecticMatrix,
    nu: IndexMod4,
    m_s: CayleySymmetric,
    det_s_minus_i: f64,
}

impl MwDescriptor {
    pub fn new(s: SymplecticMatrix, nu: IndexMod4) -> Result<Self> {
        let det_s_minus_i = s.det_minus_identity();
        if !tolerances::clears_det_tol(det_s_minus_i, max_abs(s.matrix())) {
            return Err(Error::FixedPoint { det: det_s_minus_i });
        }
        let m_s = cayley_m(&s)?;
        Ok(Self {
            s,
            nu,
            m_s,
            det_s_minus_i,
        })
    }

    /// Descriptor of a free matrix on the sheet selected by its Maslov index:
    /// nu = m - Inert W_xx mod 4.
    pub fn from_free(w: &crate::symplectic::FreeGenerator) -> Result<Self> {
        let nu = crate::index::nu_from_generator(w)?;
        Self::new(w.matrix(), nu)
    }

    /// Rotation descriptor for half-dimension 1: S(theta) rotates (x, p) by
    /// [cos t, sin t; -sin t, cos t], so S(pi/2) is the standard J. The whole
    /// family theta in (0, 2 pi) sits on the sheet nu = 3, fixed by the index
    /// relation at theta = pi/2.
    pub fn rotation(theta: f64) -> Result<Self> {
        let (s, c) = theta.sin_cos();
        let mat = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        Self::new(SymplecticMatrix::new(mat)?, IndexMod4::new(3))
    }

    pub fn s(&self) -> &SymplecticMatrix {
        &self.s
    }

    pub fn nu(&self) -> IndexMod4 {
        self.nu
    }

    /// Same underlying matrix on the other metaplectic sheet (nu + 2).
    pub fn sheet_flipped(&self) -> Self {
        Self {
            s: self.s.clone(),
            nu: self.nu + IndexMod4::new(2),
            m_s: self.m_s.clone(),
            det_s_minus_i: self.det_s_minus_i,
        }
    }

    /// Same matrix with a prescribed nu.
    pub fn with_nu(&self, nu: IndexMod4) -> Self {
        Self {
            s: self.s.clone(),
            nu,
            m_s: self.m_s.clone(),
            det_s_minus_i: self.det_s_minus_i,
        }
    }

    pub fn cayley(&self) -> &CayleySymmetric {
        &self.m_s
    }

    pub fn det_s_minus_identity(&self) -> f64 {
        self.det_s_minus_i
    }

    pub fn half_dim(&self) -> usize {
        self.s.half_dim()
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorFile {
    n: usize,
    rows: Vec<Vec<f64>>,
    nu: u8,
}

impl Serialize for MwDescriptor {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        DescriptorFile {
            n: self.s.half_dim(),
            rows: rows_of(self.s.matrix()),
            nu: self.nu.value(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MwDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let file = DescriptorFile::deserialize(de)?;
        let mat = matrix_from_rows(&file.rows).map_err(serde::de::Error::custom)?;
        if mat.nrows() != 2 * file.n {
            return Err(serde::de::Error::custom("matrix size does not match n"));
        }
        let s = SymplecticMatrix::with_tol(mat, 1e-8).map_err(serde::de::Error::custom)?;
        MwDescriptor::new(s, IndexMod4::from_i64(file.nu as i64)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{random_symplectic, standard_j};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cayley_of_j_is_half_identity() {
        let m = cayley_m(&standard_j(1)).unwrap();
        let expect = 0.5 * DMatrix::identity(2, 2);
        assert!(max_abs(&(m.matrix() - expect)) < 1e-14);
    }

    #[test]
    fn cayley_of_minus_identity_is_zero() {
        let s = SymplecticMatrix::new(-DMatrix::identity(2, 2)).unwrap();
        let m = cayley_m(&s).unwrap();
        assert!(max_abs(m.matrix()) < 1e-14);
    }

    #[test]
    fn cayley_of_identity_is_fixed_point_error() {
        let s = SymplecticMatrix::new(DMatrix::identity(2, 2)).unwrap();
        assert!(matches!(cayley_m(&s), Err(Error::FixedPoint { .. })));
    }

    #[test]
    fn inverse_cayley_of_half_identity_is_j() {
        let m = CayleySymmetric::new(0.5 * DMatrix::identity(2, 2)).unwrap();
        let s = inverse_cayley(&m).unwrap();
        assert!(max_abs(&(s.matrix() - standard_j(1).matrix())) < 1e-14);
    }

    #[test]
    fn inverse_cayley_of_zero_is_minus_identity() {
        let m = CayleySymmetric::new(DMatrix::zeros(2, 2)).unwrap();
        let s = inverse_cayley(&m).unwrap();
        assert!(max_abs(&(s.matrix() + DMatrix::identity(2, 2))) < 1e-14);
    }

    #[test]
    fn round_trip_on_random_symmetric_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 100 {
            let n = 1 + rng.gen_range(0..4usize);
            let d = 2 * n;
            let raw = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
            let sym = 0.5 * (&raw + raw.transpose());
            let half_j = 0.5 * j_matrix(n);
            if (sym.clone() - &half_j).determinant().abs() < 0.05 {
                continue;
            }
            let m = CayleySymmetric::new(sym).unwrap();
            let s = inverse_cayley(&m).unwrap();
            let back = cayley_m(&s).unwrap();
            assert!(max_abs(&(m.matrix() - back.matrix())) < 1e-8);
            done += 1;
        }
    }

    #[test]
    fn round_trip_on_random_symplectic_matrices() {
        for seed in 0..50 {
            let n = 1 + seed as usize % 4;
            let s = random_symplectic(n, 8000 + seed, 2).unwrap();
            if !s.is_fixed_point_free() {
                continue;
            }
            let m = cayley_m(&s).unwrap();
            assert!(symmetry_defect(m.matrix()) < 1e-10);
            let back = inverse_cayley(&m).unwrap();
            assert!(max_abs(&(s.matrix() - back.matrix())) < 1e-8);
        }
    }

    #[test]
    fn descriptor_rejects_identity() {
        let s = SymplecticMatrix::new(DMatrix::identity(2, 2)).unwrap();
        assert!(matches!(
            MwDescriptor::new(s, IndexMod4::new(0)),
            Err(Error::FixedPoint { .. })
        ));
    }

    #[test]
    fn rotation_at_quarter_turn_is_j() {
        let d = MwDescriptor::rotation(std::f64::consts::FRAC_PI_2).unwrap();
        assert!(max_abs(&(d.s().matrix() - standard_j(1).matrix())) < 1e-12);
        assert_eq!(d.nu().value(), 3);
    }
}
