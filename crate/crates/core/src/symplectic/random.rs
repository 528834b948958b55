//! Seeded random ensembles. Free matrices are drawn directly from generator
//! data; generic symplectic matrices are products of free ones, which form a
//! dense subset of the group.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FreeGenerator, SymplecticMatrix};
use crate::error::Result;

/// Documented seed-splitting rule: one 64-bit mix step per index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-scale..=scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Random generator: P, Q symmetric with entries uniform in [-1, 1] and
/// L = I + E with E uniform in [-1.5, 1.5], re-drawn until |det L| > 0.1.
/// Deterministic given the seed.
pub fn random_free(n: usize, seed: u64) -> Result<FreeGenerator> {
    assert!(n >= 1, "half-dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = symmetric(&mut rng, n, 1.0);
    let q = symmetric(&mut rng, n, 1.0);
    let l = loop {
        let mut l = DMatrix::identity(n, n);
        for i in 0..n {
            for j in 0..n {
                l[(i, j)] += rng.gen_range(-1.5..=1.5);
            }
        }
        if l.determinant().abs() > 0.1 {
            break l;
        }
    };
    FreeGenerator::new(p, l, q)
}

/// Product of k random free matrices, seeded factor-by-factor.
pub fn random_symplectic(n: usize, seed: u64, k: usize) -> Result<SymplecticMatrix> {
    assert!(k >= 1, "need at least one factor");
    let mut s = random_free(n, derive_seed(seed, 0))?.matrix();
    for i in 1..k {
        s = s.compose(&random_free(n, derive_seed(seed, i as u64))?.matrix())?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{is_symplectic, max_abs};

    #[test]
    fn same_seed_same_output() {
        let a = random_symplectic(2, 42, 3).unwrap();
        let b = random_symplectic(2, 42, 3).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = random_symplectic(2, 43, 3).unwrap();
        assert!(max_abs(&(a.matrix() - c.matrix())) > 1e-6);
    }

    #[test]
    fn outputs_are_symplectic() {
        for seed in 0..50 {
            let n = 1 + seed as usize % 4;
            let s = random_symplectic(n, seed, 3).unwrap();
            assert!(is_symplectic(s.matrix(), 1e-9).unwrap());
        }
    }

    #[test]
    fn products_are_generically_fixed_point_free() {
        let mut fixed = 0;
        for seed in 0..100 {
            let s = random_symplectic(2, 10_000 + seed, 3).unwrap();
            if !s.is_fixed_point_free() {
                fixed += 1;
            }
        }
        assert!(fixed <= 2, "{fixed} of 100 draws had eigenvalue 1");
    }
}
