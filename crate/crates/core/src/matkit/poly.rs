//! Characteristic polynomials and complex polynomial roots.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matkit::matrix::{Matrix, C64, ONE, ZERO};

/// Largest dimension accepted by [`char_poly`].
pub const CHAR_POLY_MAX_DIM: usize = 16;

/// Polynomial with complex coefficients stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polynomial {
    pub coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// All roots by Aberth–Ehrlich iteration followed by a Newton polish.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        let n = coeffs.len().saturating_sub(1);
        if n == 0 {
            return Ok(Vec::new());
        }
        let lead = coeffs[n];
        let monic = Polynomial::new(coeffs.iter().map(|c| c / lead).collect());
        let d = monic.derivative();

        // Cauchy bound for the initial circle; offset angle avoids symmetry.
        let bound = 1.0 + monic.coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let radius = bound.min(
            monic.coeffs[..n]
                .iter()
                .map(|c| c.norm())
                .sum::<f64>()
                .max(1e-3),
        );
        let mut z: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
            .collect();

        // A root is settled once |p(z)| is within the rounding error of
        // Horner's rule, `|p(z)| ≤ 8n·ε·Σ|a_k||z|^k`.
        let abs_coeffs: Vec<f64> = monic.coeffs.iter().map(|c| c.norm()).collect();
        let rounding = |x: C64| {
            let r = x.norm();
            8.0 * n as f64 * f64::EPSILON * abs_coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
        };
        const MAX_ITER: usize = 800;
        let mut settled = vec![false; n];
        let mut done = false;
        for _ in 0..MAX_ITER {
            let mut max_step: f64 = 0.0;
            for i in 0..n {
                if settled[i] {
                    continue;
                }
                let p = monic.eval(z[i]);
                let dp = d.eval(z[i]);
                if p.norm() <= rounding(z[i]) {
                    settled[i] = true;
                    continue;
                }
                let ratio = p / dp;
                let mut s = ZERO;
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        let diff = z[i] - zj;
                        if diff != ZERO {
                            s += ONE / diff;
                        }
                    }
                }
                let denom = ONE - ratio * s;
                let step = if denom.norm() > 0.0 { ratio / denom } else { ratio };
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
                }
            }
            if max_step < 1e-15 || settled.iter().all(|&b| b) {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NoConvergence {
                algorithm: "Aberth root finder",
                iterations: MAX_ITER,
            });
        }
        for zi in z.iter_mut() {
            for _ in 0..3 {
                let dp = d.eval(*zi);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = monic.eval(*zi) / dp;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                *zi -= step;
            }
        }
        Ok(z)
    }
}

/// `det(zI − A)` by the Faddeev–LeVerrier recursion, returned monic with
/// `n + 1` coefficients.
pub fn char_poly(a: &Matrix) -> Result<Polynomial> {
    let n = a.require_square("char_poly")?;
    if n > CHAR_POLY_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            limit: CHAR_POLY_MAX_DIM,
        });
    }
    let mut c = vec![ZERO; n + 1];
    c[n] = ONE;
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k−1} + c_{n−k+1} I ; c_{n−k} = −tr(A M_k) / k
        let mut next = a.matmul(&m);
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        c[n - k] = -a.matmul(&m).trace() / k as f64;
    }
    Ok(Polynomial::new(c))
}

/// Full convolution of two coefficient lists (lowest degree first).
pub fn poly_mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::eig::eigenvalues_qr;
    use crate::matkit::random::{random_matrix, rng_from_seed};

    fn real(c: &[C64]) -> Vec<f64> {
        c.iter().map(|z| z.re).collect()
    }

    #[test]
    fn nilpotent_shift_gives_monomial() {
        for n in 1..=8 {
            let p = char_poly(&Matrix::jordan(n)).unwrap();
            let mut want = vec![0.0; n + 1];
            want[n] = 1.0;
            assert_eq!(real(&p.coeffs), want);
        }
    }

    #[test]
    fn diagonal_quadratic() {
        let a = Matrix::diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let p = char_poly(&a).unwrap();
        assert_eq!(real(&p.coeffs), vec![2.0, -3.0, 1.0]);
    }

    #[test]
    fn dimension_guard() {
        let err = char_poly(&Matrix::identity(17)).unwrap_err();
        assert_eq!(err, Error::DimensionTooLarge { n: 17, limit: 16 });
    }

    #[test]
    fn vanishes_at_qr_eigenvalues() {
        let mut rng = rng_from_seed(21);
        for n in 2..=8 {
            let a = random_matrix(n, n, &mut rng).scale_real(0.5);
            let p = char_poly(&a).unwrap();
            for lam in eigenvalues_qr(&a).unwrap() {
                assert!(p.eval(lam).norm() <= 1e-6, "n={n}");
            }
        }
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (z − 1)(z + 2)(z − i)
        let f = poly_mul(
            &poly_mul(&[C64::new(-1.0, 0.0), ONE], &[C64::new(2.0, 0.0), ONE]),
            &[C64::new(0.0, -1.0), ONE],
        );
        let mut r = Polynomial::new(f).roots().unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let want = [C64::new(-2.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0)];
        for (g, w) in r.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn convolution_expands_factored_form() {
        let f = poly_mul(
            &poly_mul(
                &Polynomial::from_real(&[0.0, 0.0, 1.0]).coeffs,
                &Polynomial::from_real(&[-3.0, 0.0, 1.0]).coeffs,
            ),
            &Polynomial::from_real(&[-48.0, 46.0, 17.0, -17.0, -1.0, 1.0]).coeffs,
        );
        assert_eq!(
            real(&f),
            vec![0.0, 0.0, 144.0, -138.0, -99.0, 97.0, 20.0, -20.0, -1.0, 1.0]
        );
    }
}
