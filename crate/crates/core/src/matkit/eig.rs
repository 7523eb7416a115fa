//! Eigenvalue solvers: cyclic complex Jacobi for Hermitian matrices and a
//! shifted Hessenberg QR iteration for general square matrices.

use crate::error::{Error, Result};
use crate::matkit::matrix::{Matrix, C64, ONE, ZERO};
use crate::matkit::tolerance::Tolerance;

const JACOBI_MAX_SWEEPS: usize = 60;
const JACOBI_REL_OFF: f64 = 1e-13;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl HermitianEigen {
    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::INFINITY)
    }

    /// Eigenvector belonging to the largest eigenvalue.
    pub fn top_vector(&self) -> Vec<C64> {
        self.vectors.column(self.vectors.cols() - 1)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eig(h: &Matrix, tol: &Tolerance) -> Result<HermitianEigen> {
    h.require_square("hermitian_eig")?;
    let deviation = h.hermitian_deviation();
    if deviation > tol.abs * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    jacobi(h, None)
}

/// Jacobi started from a guess basis `start` (typically the eigenvectors of
/// a nearby matrix). The input must already be Hermitian.
pub(crate) fn hermitian_eig_warm(h: &Matrix, start: Option<&Matrix>) -> Result<HermitianEigen> {
    jacobi(h, start)
}

fn jacobi(h: &Matrix, start: Option<&Matrix>) -> Result<HermitianEigen> {
    let n = h.rows();
    let (mut a, mut v) = match start {
        Some(v0) => (h.conjugate_by(v0), v0.clone()),
        None => (h.clone(), Matrix::identity(n)),
    };
    // Diagonal of a Hermitian matrix is real; drop conjugation residue.
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let scale = h.frobenius_norm();
    let target = JACOBI_REL_OFF * scale;

    let mut converged = false;
    for _sweep in 0..=JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            algorithm: "Hermitian Jacobi",
            iterations: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    Ok(HermitianEigen {
        values: order.iter().map(|&i| a[(i, i)].re).collect(),
        vectors: v.select_columns(&order),
    })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Jacobi rotation coefficients `(c, s)` that annihilate the `(p, q)` entry
/// of the 2×2 Hermitian block `[[app, |apq|], [|apq|, aqq]]`.
pub(crate) fn jacobi_cs(app: f64, aqq: f64, apq_abs: f64) -> (f64, f64) {
    let tau = (aqq - app) / (2.0 * apq_abs);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
        sign / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// Applies `G* A G` and `V G` with
/// `G = [[c, s·e], [−s·ē, c]]` on coordinates `(p, q)`, `e = a_pq / |a_pq|`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 || abs < f64::MIN_POSITIVE * 1e4 {
        return;
    }
    let e = apq / abs;
    let (c, s) = jacobi_cs(a[(p, p)].re, a[(q, q)].re, abs);
    let se = e * s;
    let se_conj = se.conj();
    let n = a.rows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - se_conj * akq;
        a[(k, q)] = se * akp + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - se * aqk;
        a[(q, k)] = se_conj * apk + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..v.rows() {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - se_conj * vkq;
        v[(k, q)] = se * vkp + vkq * c;
    }
}

const QR_MAX_ITER_PER_EIG: usize = 60;

/// All eigenvalues of a general square matrix (Householder reduction to
/// Hessenberg form followed by Wilkinson-shifted complex QR sweeps).
pub fn eigenvalues_qr(a: &Matrix) -> Result<Vec<C64>> {
    let n = a.require_square("eigenvalues_qr")?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(a);
    let mut eigs = vec![ZERO; n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eigs[0] = h[(0, 0)];
            break;
        }
        // Locate the active unreduced block [lo, hi].
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let floor = f64::EPSILON * if diag > 0.0 { diag } else { 1.0 };
            if sub <= floor {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigs[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > QR_MAX_ITER_PER_EIG {
            return Err(Error::NoConvergence {
                algorithm: "Hessenberg QR",
                iterations: total,
            });
        }
        let shift = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm() * 0.75, 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(eigs)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    // Eigenvalue of [[a, b], [c, d]] closest to d.
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the Hessenberg window `[lo, hi]`:
/// `H − μI = QR`, `H ← RQ + μI`, via Givens rotations.
fn qr_step(h: &mut Matrix, lo: usize, hi: usize, mu: C64) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        // Rows k, k+1 ← G* rows with G* = [[c, s], [−s̄, c]].
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        // Columns k, k+1 ← columns · G with G = [[c, −s], [s̄, c]].
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = -s * x + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Complex Givens pair with `[[c, s], [−s̄, c]] · [x; y] = [r; 0]`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

fn hessenberg(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let alpha_norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let mut v = x.clone();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H ← P H P with P = I − 2 v v* / (v* v) acting on rows/cols k+1..n.
        for j in 0..n {
            let mut s = ZERO;
            for (t, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + t, j)];
            }
            let f = s * (2.0 / vnorm2);
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * f;
            }
        }
        for i in 0..n {
            let mut s = ZERO;
            for (t, vi) in v.iter().enumerate() {
                s += h[(i, k + 1 + t)] * vi;
            }
            let f = s * (2.0 / vnorm2);
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= f * vi.conj();
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}
