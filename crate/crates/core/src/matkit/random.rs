//! Seeded random matrix generators used by the generators and test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matkit::matrix::{dot, norm, Matrix, C64};

pub type MatrixRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> MatrixRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary: Gram–Schmidt on a Gaussian matrix with the
/// phases of `R`'s diagonal folded back into `Q`.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let g = random_matrix(n, n, rng);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for mut v in g.columns() {
            let original = norm(&v);
            for _ in 0..2 {
                for q in &cols {
                    let c = dot(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
            }
            let r = norm(&v);
            if r < 1e-8 * original {
                ok = false;
                break;
            }
            for vi in v.iter_mut() {
                *vi /= r;
            }
            cols.push(v);
        }
        if ok {
            return Matrix::from_columns(n, &cols);
        }
    }
}

/// Random matrix scaled to operator norm `target ≤ 1`.
pub fn random_contraction(n: usize, target: f64, rng: &mut impl Rng) -> Matrix {
    let g = random_matrix(n, n, rng);
    let s = crate::matkit::svd::operator_norm(&g);
    if s == 0.0 {
        return g;
    }
    g.scale_real(target / s)
}

/// Uniform point in the open disc of the given radius.
pub fn random_in_disc(radius: f64, rng: &mut impl Rng) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    let t = rng.random::<f64>() * std::f64::consts::TAU;
    C64::from_polar(r, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(1);
        for n in [1, 2, 7, 14] {
            let u = random_unitary(n, &mut rng);
            assert!(u.isometry_defect() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let a = random_matrix(3, 3, &mut rng_from_seed(5));
        let b = random_matrix(3, 3, &mut rng_from_seed(5));
        assert_eq!(a, b);
    }
}
