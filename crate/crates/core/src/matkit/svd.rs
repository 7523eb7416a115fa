//! Singular value decomposition by one-sided (Hestenes) Jacobi, plus the
//! rank, kernel and completion helpers built on it.

use crate::error::{Error, Result};
use crate::matkit::eig::jacobi_cs;
use crate::matkit::matrix::{dot, norm, Matrix, C64, ONE, ZERO};
use crate::matkit::tolerance::Tolerance;

const MAX_SWEEPS: usize = 60;

/// `A = U · diag(sigma) · V*` with `U` (rows×rows) and `V` (cols×cols)
/// unitary and `sigma` descending, of length `min(rows, cols)`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Rebuilds `U Σ V*`.
    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut s = Matrix::zeros(m, n);
        for (i, &x) in self.sigma.iter().enumerate() {
            s[(i, i)] = C64::new(x, 0.0);
        }
        self.u.matmul(&s).matmul(&self.v.adjoint())
    }
}

pub fn svd(a: &Matrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = tall_svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    tall_svd(a)
}

fn tall_svd(a: &Matrix) -> Result<Svd> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.columns();
    let mut v = Matrix::identity(n).columns();
    let eps = (m.max(4) as f64) * f64::EPSILON;

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha < f64::MIN_POSITIVE || beta < f64::MIN_POSITIVE {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let (c, s) = jacobi_cs(alpha, beta, g);
                let se = e * s;
                let (wp, wq) = pair_mut(&mut w, p, q);
                rotate_pair(wp, wq, c, se);
                let (vp, vq) = pair_mut(&mut v, p, q);
                rotate_pair(vp, vq, c, se);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            algorithm: "one-sided Jacobi SVD",
            iterations: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let v_sorted: Vec<Vec<C64>> = order.iter().map(|&i| v[i].clone()).collect();
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    for &i in &order {
        let s = norms[i];
        if s <= f64::MIN_POSITIVE * 1e8 {
            break;
        }
        u_cols.push(w[i].iter().map(|z| z / s).collect());
    }
    let u = complete_columns(m, u_cols);
    Ok(Svd {
        u,
        sigma,
        v: Matrix::from_columns(n, &v_sorted),
    })
}

fn pair_mut<T>(v: &mut [T], p: usize, q: usize) -> (&mut T, &mut T) {
    debug_assert!(p < q);
    let (head, tail) = v.split_at_mut(q);
    (&mut head[p], &mut tail[0])
}

/// `[x, y] ← [x, y] · [[c, s·e], [−s·ē, c]]`, with `se = s·e`.
fn rotate_pair(x: &mut [C64], y: &mut [C64], c: f64, se: C64) {
    let se_conj = se.conj();
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi;
        *xi = a * c - se_conj * b;
        *yi = se * a + b * c;
    }
}

/// Appends orthonormal columns until there are `rows` of them. Each new
/// column is the standard basis vector with the largest residual against
/// the current span, orthogonalized twice (modified Gram–Schmidt).
fn complete_columns(rows: usize, mut cols: Vec<Vec<C64>>) -> Matrix {
    while cols.len() < rows {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for i in 0..rows {
            let mut g = vec![ZERO; rows];
            g[i] = ONE;
            for _ in 0..2 {
                for q in &cols {
                    let c = dot(q, &g);
                    for (gi, qi) in g.iter_mut().zip(q) {
                        *gi -= c * qi;
                    }
                }
            }
            let r = norm(&g);
            if best.as_ref().is_none_or(|(b, _)| r > *b + 1e-12) {
                best = Some((r, g));
            }
        }
        let (r, g) = best.expect("rows > 0");
        cols.push(g.iter().map(|z| z / r).collect());
    }
    cols.truncate(rows);
    Matrix::from_columns(rows, &cols)
}

/// Extends the isometric columns of `w` (n×m, n ≥ m) to an n×n unitary whose
/// first `m` columns are exactly `w`.
pub fn orthonormal_completion(w: &Matrix) -> Result<Matrix> {
    if w.rows() < w.cols() {
        return Err(Error::Dimension(format!(
            "cannot complete {}×{} columns to a unitary",
            w.rows(),
            w.cols()
        )));
    }
    let deviation = w.isometry_defect();
    if deviation > 1e-8 {
        return Err(Error::NotIsometric { deviation });
    }
    Ok(complete_columns(w.rows(), w.columns()))
}

pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.sigma)
}

/// Largest singular value; 0 for an empty matrix.
pub fn operator_norm(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    // Jacobi on at most a few hundred columns converges; a failure would
    // mean non-finite input, which the constructor already excludes.
    svd(a).map(|s| s.sigma_max()).unwrap_or(f64::NAN)
}

/// Number of singular values above `max(rank_rel·σ_max, abs)`.
pub fn rank_tol(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    let s = svd(a)?;
    Ok(rank_from_sigma(&s.sigma, tol))
}

pub(crate) fn rank_from_sigma(sigma: &[f64], tol: &Tolerance) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    let thr = tol.rank_threshold(smax);
    sigma.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis (as columns) of `ker A`, from the right singular
/// vectors beyond the numerical rank.
pub fn null_space(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let s = svd(a)?;
    let r = rank_from_sigma(&s.sigma, tol);
    let idx: Vec<usize> = (r..a.cols()).collect();
    Ok(s.v.select_columns(&idx))
}
