//! Free symplectic matrices and their quadratic generators.
//!
//! A generator is the data (P, L, Q) of the quadratic form
//! W(x, x') = <Px, x>/2 - <Lx, x'> + <Qx', x'>/2 with P, Q symmetric and L
//! invertible. It generates the free symplectic matrix
//! S_W = [L^{-1}Q, L^{-1}; P L^{-1} Q - L^T, P L^{-1}], and conversely a free
//! S (invertible upper-right block B) has P = D B^{-1}, L = B^{-1},
//! Q = B^{-1} A.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{matrix_from_rows, max_abs, rows_of, symmetry_defect, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::index::IndexMod4;
use crate::tolerances::{self, TOL_SYMP};

/// Generator data (P, L, Q) of a free symplectic matrix, with an optional
/// Maslov index m mod 4 fixing the branch of arg det L (m pi = arg det L
/// mod 2 pi, so m is even exactly when det L > 0).
#[derive(Debug, Clone, PartialEq)]
pub struct FreeGenerator {
    n: usize,
    p: DMatrix<f64>,
    l: DMatrix<f64>,
    q: DMatrix<f64>,
    maslov: Option<IndexMod4>,
}

impl FreeGenerator {
    pub fn new(p: DMatrix<f64>, l: DMatrix<f64>, q: DMatrix<f64>) -> Result<Self> {
        let n = l.nrows();
        for (name, m) in [("P", &p), ("L", &l), ("Q", &q)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension(format!(
                    "{name} must be {n}x{n}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        for (name, m) in [("P", &p), ("Q", &q)] {
            let defect = symmetry_defect(m);
            if defect > TOL_SYMP {
                return Err(Error::InvalidGenerator(format!(
                    "{name} is not symmetric (defect {defect:.3e})"
                )));
            }
        }
        let det_l = l.determinant();
        if !tolerances::clears_det_tol(det_l, max_abs(&l)) {
            return Err(Error::InvalidGenerator(format!(
                "L is singular (det {det_l:.3e})"
            )));
        }
        Ok(Self {
            n,
            p,
            l,
            q,
            maslov: None,
        })
    }

    /// Scalar constructor for n = 1.
    pub fn scalar(p: f64, l: f64, q: f64) -> Result<Self> {
        Self::new(
            DMatrix::from_element(1, 1, p),
            DMatrix::from_element(1, 1, l),
            DMatrix::from_element(1, 1, q),
        )
    }

    /// Attach a Maslov index; it must satisfy the branch condition
    /// (even iff det L > 0).
    pub fn with_maslov(mut self, m: IndexMod4) -> Result<Self> {
        let det_l = self.l.determinant();
        let even = m.value() % 2 == 0;
        if even != (det_l > 0.0) {
            return Err(Error::InvalidGenerator(format!(
                "Maslov index {m} has the wrong parity for det L = {det_l:.3e}"
            )));
        }
        self.maslov = Some(m);
        Ok(self)
    }

    /// Attach the canonical Maslov index, the smaller admissible choice
    /// (0 for det L > 0, 1 for det L < 0).
    pub fn with_maslov_auto(self) -> Result<Self> {
        let (m, _) = crate::index::maslov_choices(&self.l)?;
        self.with_maslov(m)
    }

    /// The generator of the standard form matrix J: (P, L, Q) = (0, I, 0).
    pub fn standard_j(n: usize) -> Self {
        Self {
            n,
            p: DMatrix::zeros(n, n),
            l: DMatrix::identity(n, n),
            q: DMatrix::zeros(n, n),
            maslov: None,
        }
    }

    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn l(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn maslov(&self) -> Option<IndexMod4> {
        self.maslov
    }

    pub fn det_l(&self) -> f64 {
        self.l.determinant()
    }

    /// The free symplectic matrix generated by this quadratic form.
    pub fn matrix(&self) -> SymplecticMatrix {
        let l_inv = self
            .l
            .clone()
            .try_inverse()
            .expect("L invertibility is a constructor invariant");
        let n = self.n;
        let a = &l_inv * &self.q;
        let c = &self.p * &l_inv * &self.q - self.l.transpose();
        let d = &self.p * &l_inv;
        let mut mat = DMatrix::zeros(2 * n, 2 * n);
        mat.view_mut((0, 0), (n, n)).copy_from(&a);
        mat.view_mut((0, n), (n, n)).copy_from(&l_inv);
        mat.view_mut((n, 0), (n, n)).copy_from(&c);
        mat.view_mut((n, n), (n, n)).copy_from(&d);
        SymplecticMatrix::new(mat).expect("generated matrix must be symplectic")
    }

    /// Quadratic form value W(x, x').
    pub fn eval(&self, x: &DVector<f64>, x_prime: &DVector<f64>) -> f64 {
        0.5 * (&self.p * x).dot(x) - (&self.l * x).dot(x_prime) + 0.5 * (&self.q * x_prime).dot(x_prime)
    }

    /// Inverse rule: W*(x, x') = -W(x', x) gives (P*, L*, Q*) = (-Q, -L^T, -P)
    /// and m* = n - m mod 4. Requires a Maslov index.
    pub fn inverse(&self) -> Result<FreeGenerator> {
        let m = self.maslov.ok_or_else(|| {
            Error::InvalidGenerator("inverse rule needs a Maslov index".into())
        })?;
        let inv = FreeGenerator::new(-self.q.clone(), -self.l.transpose(), -self.p.clone())?;
        let m_star = IndexMod4::from_i64(self.n as i64 - m.value() as i64);
        inv.with_maslov(m_star)
    }

    /// Hessian of x -> W(x, x): W_xx = P + Q - L - L^T.
    pub fn hessian_wxx(&self) -> DMatrix<f64> {
        &self.p + &self.q - &self.l - self.l.transpose()
    }

    /// det(S_W - I) computed from the generator:
    /// (-1)^n det(L^{-1}) det(P + Q - L - L^T).
    pub fn det_minus_identity(&self) -> f64 {
        let sign = if self.n % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.hessian_wxx().determinant() / self.det_l()
    }

    /// Both sides of the pairing identity
    /// <M_S (0, p0), (0, p0)> = -<W_xx^{-1} p0, p0>,
    /// valid for free S with det(S - I) != 0.
    ///
    /// Returns (lhs, rhs). Errors when the Hessian is singular.
    pub fn momentum_pairing(&self, p0: &DVector<f64>) -> Result<(f64, f64)> {
        if p0.len() != self.n {
            return Err(Error::Dimension(format!(
                "p0 must have length {}, got {}",
                self.n,
                p0.len()
            )));
        }
        let wxx = self.hessian_wxx();
        let det_w = wxx.determinant();
        if !tolerances::clears_det_tol(det_w, max_abs(&wxx)) {
            return Err(Error::DegenerateHessian { det: det_w });
        }
        let s = self.matrix();
        let m = super::cayley_m(&s)?;
        let mut z = DVector::zeros(2 * self.n);
        z.rows_mut(self.n, self.n).copy_from(p0);
        let lhs = (m.matrix() * &z).dot(&z);
        let w_inv = wxx.try_inverse().ok_or(Error::DegenerateHessian { det: det_w })?;
        let rhs = -(&w_inv * p0).dot(p0);
        Ok((lhs, rhs))
    }

    /// The four matrix factors of S_W: the ordered product
    /// V_{-P} * M_L * J * V_{-Q} equals S_W, where V_{-R} = [I 0; R I] and
    /// M_L = [L^{-1} 0; 0 L^T].
    pub fn factorization(&self) -> [SymplecticMatrix; 4] {
        let n = self.n;
        let v = |r: &DMatrix<f64>| {
            let mut m = DMatrix::identity(2 * n, 2 * n);
            m.view_mut((n, 0), (n, n)).copy_from(r);
            SymplecticMatrix::new(m).expect("shear factor is symplectic")
        };
        let l_inv = self
            .l
            .clone()
            .try_inverse()
            .expect("L invertibility is a constructor invariant");
        let mut scale = DMatrix::zeros(2 * n, 2 * n);
        scale.view_mut((0, 0), (n, n)).copy_from(&l_inv);
        scale
            .view_mut((n, n), (n, n))
            .copy_from(&self.l.transpose());
        [
            v(&self.p),
            SymplecticMatrix::new(scale).expect("scaling factor is symplectic"),
            super::standard_j(n),
            v(&self.q),
        ]
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorFile {
    n: usize,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
    #[serde(rename = "L")]
    l: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
    m: Option<u8>,
}

impl Serialize for FreeGenerator {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        GeneratorFile {
            n: self.n,
            p: rows_of(&self.p),
            l: rows_of(&self.l),
            q: rows_of(&self.q),
            m: self.maslov.map(|m| m.value()),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FreeGenerator {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let file = GeneratorFile::deserialize(de)?;
        let p = matrix_from_rows(&file.p).map_err(serde::de::Error::custom)?;
        let l = matrix_from_rows(&file.l).map_err(serde::de::Error::custom)?;
        let q = matrix_from_rows(&file.q).map_err(serde::de::Error::custom)?;
        if p.nrows() != file.n {
            return Err(serde::de::Error::custom("block size does not match n"));
        }
        let gen = FreeGenerator::new(p, l, q).map_err(serde::de::Error::custom)?;
        match file.m {
            Some(m) => gen
                .with_maslov(IndexMod4::from_i64(m as i64))
                .map_err(serde::de::Error::custom),
            None => Ok(gen),
        }
    }
}
