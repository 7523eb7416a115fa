//! Self-contained dense complex linear algebra: Hermitian eigensolver, SVD,
//! rank with tolerance, orthonormal completion, Kronecker products and
//! characteristic polynomials.

pub mod eig;
pub mod matrix;
pub mod poly;
pub mod random;
pub mod svd;
pub mod tolerance;

pub use eig::{eigenvalues_qr, hermitian_eig, HermitianEigen};
pub use matrix::{Matrix, C64, ONE, ZERO};
pub use poly::{char_poly, poly_mul, Polynomial, CHAR_POLY_MAX_DIM};
pub use svd::{null_space, operator_norm, orthonormal_completion, rank_tol, singular_values, svd, Svd};
pub use tolerance::Tolerance;

use crate::error::Result;

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kron(b)
}

/// Algebraic multiplicity of the eigenvalue 0: `n − rank A^k` at the first
/// `k` with `rank A^k = rank A^{k+1}`. Stopping there keeps small nonzero
/// eigenvalues from being raised to powers that fall below the rank cut-off.
pub fn zero_multiplicity(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    let n = a.require_square("zero_multiplicity")?;
    let mut prev = n;
    let mut p = Matrix::identity(n);
    for _ in 0..n {
        p = p.matmul(a);
        let r = rank_tol(&p, tol)?;
        if r == prev {
            break;
        }
        prev = r;
    }
    Ok(n - prev)
}

/// Eigenvalues of a square matrix with the zero eigenvalue's algebraic
/// multiplicity fixed by [`zero_multiplicity`].
///
/// The remaining eigenvalues come from the deflated characteristic
/// polynomial for `n ≤ 16` and from Hessenberg QR above that. Zero
/// eigenvalues are returned first.
pub fn eigenvalues(a: &Matrix, tol: &Tolerance) -> Result<Vec<C64>> {
    let n = a.require_square("eigenvalues")?;
    let zero_mult = zero_multiplicity(a, tol)?;
    let mut out = vec![ZERO; zero_mult];
    if zero_mult == n {
        return Ok(out);
    }
    if n <= CHAR_POLY_MAX_DIM {
        let p = char_poly(a)?;
        let deflated = Polynomial::new(p.coeffs[zero_mult..].to_vec());
        out.extend(deflated.roots()?);
    } else {
        let mut all = eigenvalues_qr(a)?;
        all.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
        out.extend(all.into_iter().skip(zero_mult));
    }
    Ok(out)
}

/// Greedy nearest pairing of two eigenvalue multisets. Returns the largest
/// pairing distance, or `None` when the sizes differ.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (best, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[best] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
