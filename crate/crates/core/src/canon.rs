//! Unitary canonical forms for power partial isometries.
//!
//! [`staircase_form`] splits the space along `ker A ⊂ ker A² ⊂ …` and returns
//! the block staircase together with its conjugating unitary.
//! [`normalize_staircase`] turns every superdiagonal isometry into `[I; 0]`
//! and peels off the Jordan tail, [`halmos_wallen`] produces
//! `U ⊕ J_{k_1} ⊕ ⋯ ⊕ J_{k_m}` for matrices whose powers are all partial
//! isometries, and [`classify_pmax`] recognizes the extremal case
//! `p(A) = n − 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::{ascent, is_partial_isometry, ppi_index, ppi_model, PpiIndex};
use crate::matkit::svd::{null_space, orthonormal_completion, svd};
use crate::matkit::{Matrix, Tolerance};

/// Relative bound for reconstruction and zero-pattern residuals.
pub const RESIDUAL_REL: f64 = 1e-8;

/// Bound for the isometry defects of the staircase blocks.
pub const ISOMETRY_BOUND: f64 = 1e-8;

fn residual_bound(a: &Matrix) -> f64 {
    RESIDUAL_REL * a.frobenius_norm().max(1.0)
}

fn breach(what: &str, residual: f64, bound: f64) -> Result<()> {
    if residual > bound || residual.is_nan() {
        return Err(Error::ToleranceBreach {
            what: what.to_string(),
            residual,
            bound,
        });
    }
    Ok(())
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

/// Block data of the staircase model
///
/// ```text
/// [0 A_1           ]
/// [   0  A_2       ]
/// [        ⋱  ⋱    ]
/// [           0  B ]
/// [              C ]
/// ```
///
/// on `H_1 ⊕ ⋯ ⊕ H_k ⊕ (ker A^k)^⊥`, with `A_j` isometric and
/// `B*B + C*C = I`.
#[derive(Clone, Debug, Serialize)]
pub struct StaircaseForm {
    pub k: usize,
    /// `n_1 ≥ ⋯ ≥ n_k`.
    pub sizes: Vec<usize>,
    pub core_size: usize,
    /// `A_1 … A_{k−1}`, `A_j` of shape `n_j × n_{j+1}`.
    pub blocks: Vec<Matrix>,
    pub b: Matrix,
    pub c: Matrix,
    /// Columns are the adapted basis: `conjugator* · A · conjugator` is the
    /// assembled model up to `residual`.
    pub conjugator: Matrix,
    pub residual: f64,
}

impl StaircaseForm {
    pub fn dim(&self) -> usize {
        self.sizes.iter().sum::<usize>() + self.core_size
    }

    /// The block matrix described by this form. Empty blocks are absent.
    pub fn assemble(&self) -> Matrix {
        let n = self.dim();
        let off = offsets(&self.sizes);
        let mut out = Matrix::zeros(n, n);
        for (j, blk) in self.blocks.iter().enumerate() {
            out.set_block(off[j], off[j + 1], blk);
        }
        if self.k > 0 {
            out.set_block(off[self.k - 1], off[self.k], &self.b);
        }
        out.set_block(off[self.k], off[self.k], &self.c);
        out
    }

    /// Largest of `‖A_j*A_j − I‖_F` and `‖B*B + C*C − I‖_F`.
    pub fn isometry_defect(&self) -> f64 {
        let bc = self.b.vstack(&self.c);
        self.blocks
            .iter()
            .map(Matrix::isometry_defect)
            .fold(bc.isometry_defect(), f64::max)
    }
}

/// Staircase form of `A` with `k = min(ell, a(A))` levels.
///
/// `A, …, A^k` must be partial isometries. The adapted basis consists of
/// orthonormal bases of `H_1 = ker A`, `H_j = ker A^j ⊖ ker A^{j−1}` and
/// the orthogonal complement of `ker A^k`. The zero pattern of the
/// conjugated matrix is measured, not assumed.
pub fn staircase_form(a: &Matrix, ell: usize, tol: &Tolerance) -> Result<StaircaseForm> {
    let n = a.require_square("staircase_form")?;
    if ell == 0 {
        return Err(Error::BadParameters("ell must be at least 1".into()));
    }
    let k = ell.min(ascent(a, tol)?);

    let mut powers = Vec::with_capacity(k.max(1));
    let mut power = a.clone();
    for j in 1..=k.max(1) {
        if !is_partial_isometry(&power, tol)? {
            return Err(Error::NotPowerPartialIsometry { power: j });
        }
        let next = power.matmul(a);
        powers.push(power);
        power = next;
    }

    let mut basis = Matrix::zeros(n, 0);
    let mut sizes = Vec::with_capacity(k);
    for pw in powers.iter().take(k) {
        let kernel = null_space(pw, tol)?;
        let fresh = kernel.cols().checked_sub(basis.cols()).filter(|&d| d > 0).ok_or_else(|| {
            Error::Dimension(format!("kernel chain stalls at level {}", sizes.len() + 1))
        })?;
        let projected = &kernel - &basis.matmul(&basis.adjoint().matmul(&kernel));
        let s = svd(&projected)?;
        let idx: Vec<usize> = (0..fresh).collect();
        basis = basis.hstack(&s.u.select_columns(&idx));
        sizes.push(fresh);
    }
    if sizes.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Dimension(format!("level sizes {sizes:?} are not nonincreasing")));
    }

    let v = orthonormal_completion(&basis)?;
    breach("conjugator unitarity", v.isometry_defect(), 1e-12 * n.max(1) as f64)?;
    let m = n - basis.cols();
    let conj = a.conjugate_by(&v);
    let off = offsets(&sizes);
    let blocks = (1..k)
        .map(|j| conj.block(off[j - 1], off[j], sizes[j - 1], sizes[j]))
        .collect();
    let b = if k > 0 {
        conj.block(off[k - 1], off[k], sizes[k - 1], m)
    } else {
        Matrix::zeros(0, m)
    };
    let c = conj.block(off[k], off[k], m, m);
    let mut form = StaircaseForm {
        k,
        sizes,
        core_size: m,
        blocks,
        b,
        c,
        conjugator: v,
        residual: 0.0,
    };
    form.residual = conj.distance(&form.assemble());
    breach("staircase zero pattern", form.residual, residual_bound(a))?;
    breach("staircase block isometry", form.isometry_defect(), ISOMETRY_BOUND)?;
    Ok(form)
}

/// Jordan block sizes with an optional unitary summand, `U ⊕ J_{k_1} ⊕ ⋯`.
#[derive(Clone, Debug, Serialize)]
pub struct JordanSpec {
    /// Nonincreasing.
    pub block_sizes: Vec<usize>,
    pub unitary_summand: Option<Matrix>,
    /// Columns spanning the summands in the order `U, J_{k_1}, J_{k_2}, …`.
    pub conjugator: Matrix,
    pub residual: f64,
}

impl JordanSpec {
    pub fn unitary_dim(&self) -> usize {
        self.unitary_summand.as_ref().map_or(0, Matrix::rows)
    }

    pub fn dim(&self) -> usize {
        self.unitary_dim() + self.block_sizes.iter().sum::<usize>()
    }

    pub fn assemble(&self) -> Matrix {
        let jordans: Vec<Matrix> = self.block_sizes.iter().map(|&s| Matrix::jordan(s)).collect();
        let mut parts: Vec<&Matrix> = self.unitary_summand.iter().collect();
        parts.extend(jordans.iter());
        Matrix::direct_sum(&parts)
    }
}

/// Identity staircase of width `n_k` with core `(B, C)`, followed by the
/// Jordan tail `J_{k−1}^{(n_{k−1}−n_k)} ⊕ ⋯ ⊕ J_1^{(n_1−n_2)}`.
#[derive(Clone, Debug, Serialize)]
pub struct NormalizedStaircase {
    /// Head block data; its conjugator holds the head columns only.
    pub staircase: StaircaseForm,
    /// Tail block sizes; its conjugator holds the tail columns only.
    pub tail: JordanSpec,
    /// `conjugator* · A · conjugator ≈ model`.
    pub conjugator: Matrix,
    pub model: Matrix,
    /// Bound on `‖conjugator* · A · conjugator − model‖_F`.
    pub residual: f64,
}

/// Coordinates of a staircase with `sizes`, listed chain by chain for the
/// tail (`i ≥ n_k`) after the level-major head.
fn normalized_order(sizes: &[usize], core: usize) -> (Vec<usize>, usize) {
    let k = sizes.len();
    let off = offsets(sizes);
    let width = sizes[k - 1];
    let mut order = Vec::with_capacity(off[k] + core);
    for lvl in 0..k {
        order.extend((0..width).map(|i| off[lvl] + i));
    }
    order.extend(off[k]..off[k] + core);
    let head = order.len();
    for i in width..sizes[0] {
        let len = sizes.iter().filter(|&&s| s > i).count();
        order.extend((0..len).map(|lvl| off[lvl] + i));
    }
    (order, head)
}

/// Brings a staircase form into the identity-staircase shape.
///
/// Unitaries `U_k = I, U_j = completion(A_j U_{j+1})` are built right to
/// left so that `U_j* A_j U_{j+1} = [I; 0]`; an explicit permutation then
/// separates the full-length chains from the shorter Jordan chains.
pub fn normalize_staircase(sf: &StaircaseForm) -> Result<NormalizedStaircase> {
    let n = sf.dim();
    let k = sf.k;
    if k == 0 {
        return Ok(NormalizedStaircase {
            staircase: sf.clone(),
            tail: JordanSpec {
                block_sizes: Vec::new(),
                unitary_summand: None,
                conjugator: Matrix::zeros(n, 0),
                residual: 0.0,
            },
            conjugator: sf.conjugator.clone(),
            model: sf.c.clone(),
            residual: sf.residual,
        });
    }
    let width = sf.sizes[k - 1];
    let mut us = vec![Matrix::identity(width)];
    for j in (1..k).rev() {
        let w = sf.blocks[j - 1].matmul(us.last().expect("nonempty"));
        us.push(orthonormal_completion(&w)?);
    }
    us.reverse();
    us.push(Matrix::identity(sf.core_size));
    let refs: Vec<&Matrix> = us.iter().collect();
    let d = Matrix::direct_sum(&refs);

    let (order, head_dim) = normalized_order(&sf.sizes, sf.core_size);
    let t = d.matmul(&Matrix::permutation(&order));
    let transformed = sf.assemble().conjugate_by(&t);
    let model = ppi_model(&sf.sizes, &sf.b, &sf.c)?;
    let residual = transformed.distance(&model) + sf.residual;
    breach("normalized staircase", residual, RESIDUAL_REL * model.frobenius_norm().max(1.0))?;

    let conjugator = sf.conjugator.matmul(&t);
    let head_cols: Vec<usize> = (0..head_dim).collect();
    let tail_cols: Vec<usize> = (head_dim..n).collect();
    let tail_sizes: Vec<usize> = (width..sf.sizes[0])
        .map(|i| sf.sizes.iter().filter(|&&s| s > i).count())
        .collect();
    let staircase = StaircaseForm {
        k,
        sizes: vec![width; k],
        core_size: sf.core_size,
        blocks: vec![Matrix::identity(width); k - 1],
        b: sf.b.clone(),
        c: sf.c.clone(),
        conjugator: conjugator.select_columns(&head_cols),
        residual,
    };
    let tail = JordanSpec {
        block_sizes: tail_sizes,
        unitary_summand: None,
        conjugator: conjugator.select_columns(&tail_cols),
        residual,
    };
    Ok(NormalizedStaircase {
        staircase,
        tail,
        conjugator,
        model,
        residual,
    })
}

/// `A ≅ U ⊕ J_{k_1} ⊕ ⋯ ⊕ J_{k_m}` for `A` with every power a partial
/// isometry.
pub fn halmos_wallen(a: &Matrix, tol: &Tolerance) -> Result<JordanSpec> {
    let n = a.require_square("halmos_wallen")?;
    if let PpiIndex::Finite(p) = ppi_index(a, tol)? {
        return Err(Error::NotInfiniteIndex { power: p + 1 });
    }
    let asc = ascent(a, tol)?;
    if asc == 0 {
        return Ok(JordanSpec {
            block_sizes: Vec::new(),
            unitary_summand: (n > 0).then(|| a.clone()),
            conjugator: Matrix::identity(n),
            residual: 0.0,
        });
    }
    let sf = staircase_form(a, asc, tol)?;
    let bound = residual_bound(a);
    breach("defect block B", sf.b.frobenius_norm(), bound)?;
    let normal = normalize_staircase(&sf)?;

    let (k, m) = (sf.k, sf.core_size);
    let width = sf.sizes[k - 1];
    let head = k * width;
    let mut order: Vec<usize> = (head..head + m).collect();
    for i in 0..width {
        order.extend((0..k).map(|lvl| lvl * width + i));
    }
    order.extend(head + m..n);
    let conjugator = normal.conjugator.matmul(&Matrix::permutation(&order));

    let mut block_sizes = vec![k; width];
    block_sizes.extend(&normal.tail.block_sizes);
    let spec = JordanSpec {
        block_sizes,
        unitary_summand: (m > 0).then(|| sf.c.clone()),
        conjugator,
        residual: 0.0,
    };
    if let Some(u) = &spec.unitary_summand {
        breach("unitary summand", u.isometry_defect(), 1e-10)?;
    }
    let residual = a.conjugate_by(&spec.conjugator).distance(&spec.assemble());
    breach("Jordan reconstruction", residual, bound)?;
    Ok(JordanSpec { residual, ..spec })
}

/// Outcome of [`classify_pmax`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "class")]
pub enum PmaxClass {
    #[serde(rename = "P_INFINITE")]
    Infinite,
    /// `A` is unitarily similar to `J_{n−1}`-type staircase with scalar
    /// defect pair `(a, b)`; only the moduli are invariants.
    #[serde(rename = "P_EQUALS_N_MINUS_1")]
    NMinusOne {
        a_modulus: f64,
        b_modulus: f64,
        witness: Matrix,
        conjugator: Matrix,
    },
    #[serde(rename = "P_OTHER")]
    Other { p: usize },
}

/// Decides whether `p(A)` is infinite, equal to `n − 1`, or something else,
/// and for `n − 1` rebuilds the witness
///
/// ```text
/// [0 1        ]
/// [  0 ⋱      ]
/// [    ⋱ 1    ]
/// [      0 a  ]
/// [        b  ]   with |a|² + |b|² = 1, a, b ≠ 0.
/// ```
pub fn classify_pmax(a: &Matrix, tol: &Tolerance) -> Result<PmaxClass> {
    let n = a.require_square("classify_pmax")?;
    let p = match ppi_index(a, tol)? {
        PpiIndex::Infinite => return Ok(PmaxClass::Infinite),
        PpiIndex::Finite(p) => p,
    };
    if n < 2 || p != n - 1 {
        return Ok(PmaxClass::Other { p });
    }
    let sf = staircase_form(a, n - 1, tol)?;
    if sf.sizes != vec![1; n - 1] || sf.core_size != 1 {
        return Err(Error::Dimension(format!(
            "expected unit levels with a 1×1 core, got sizes {:?} and core {}",
            sf.sizes, sf.core_size
        )));
    }
    let normal = normalize_staircase(&sf)?;
    let a_mod = sf.b[(0, 0)].norm();
    let b_mod = sf.c[(0, 0)].norm();
    breach("|a|² + |b|² = 1", (a_mod * a_mod + b_mod * b_mod - 1.0).abs(), ISOMETRY_BOUND)?;
    let floor = tol.abs * (n as f64).sqrt();
    if a_mod <= floor || b_mod <= floor {
        return Err(Error::ToleranceBreach {
            what: "defect pair must be nonzero".into(),
            residual: a_mod.min(b_mod),
            bound: floor,
        });
    }
    Ok(PmaxClass::NMinusOne {
        a_modulus: a_mod,
        b_modulus: b_mod,
        witness: normal.model,
        conjugator: normal.conjugator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::random_ppi_sample;
    use crate::matkit::random::{random_unitary, rng_from_seed};
    use crate::matkit::C64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e5(n: usize, a: C64, b: C64) -> Matrix {
        let mut m = Matrix::jordan(n);
        m[(n - 2, n - 1)] = a;
        m[(n - 1, n - 1)] = b;
        m
    }

    #[test]
    fn shift_of_three() {
        let sf = staircase_form(&Matrix::jordan(3), 3, &tol()).unwrap();
        assert_eq!((sf.k, sf.sizes.clone(), sf.core_size), (3, vec![1, 1, 1], 0));
        for blk in &sf.blocks {
            assert!((blk[(0, 0)].norm() - 1.0).abs() < 1e-12);
        }
        let normal = normalize_staircase(&sf).unwrap();
        assert!(normal.tail.block_sizes.is_empty());
        assert!(normal.model.distance(&Matrix::jordan(3)) < 1e-12);
    }

    #[test]
    fn partial_isometry_single_level() {
        let a = random_ppi_sample(&[2], 3, 4).unwrap().matrix;
        let sf = staircase_form(&a, 1, &tol()).unwrap();
        assert_eq!((sf.k, sf.sizes.clone(), sf.core_size), (1, vec![2], 3));
        assert!(sf.blocks.is_empty());
        let bc = sf.b.vstack(&sf.c);
        assert!(bc.isometry_defect() < 1e-10);
        assert!(sf.residual < 1e-10);
    }

    #[test]
    fn generator_roundtrip_sizes() {
        let a = random_ppi_sample(&[2, 1], 2, 11).unwrap().matrix;
        let sf = staircase_form(&a, 5, &tol()).unwrap();
        assert_eq!((sf.sizes.clone(), sf.core_size), (vec![2, 1], 2));
        let back = sf.assemble().conjugate_by(&sf.conjugator.adjoint());
        assert!(back.distance(&a) < 1e-10);
    }

    #[test]
    fn ell_caps_the_level_count() {
        let a = random_ppi_sample(&[2, 2, 1], 1, 5).unwrap().matrix;
        let sf = staircase_form(&a, 2, &tol()).unwrap();
        assert_eq!(sf.sizes, vec![2, 2]);
        assert_eq!(sf.core_size, 2);
    }

    #[test]
    fn normalized_tail_for_two_one() {
        let sample = random_ppi_sample(&[2, 1], 0, 8).unwrap();
        let sf = staircase_form(&sample.matrix, 2, &tol()).unwrap();
        let normal = normalize_staircase(&sf).unwrap();
        assert_eq!(normal.tail.block_sizes, vec![1]);
        let want = Matrix::direct_sum(&[&Matrix::jordan(2), &Matrix::jordan(1)]);
        assert!(normal.model.distance(&want) < 1e-10);
        let check = sample.matrix.conjugate_by(&normal.conjugator);
        assert!(check.distance(&want) < 1e-9);
    }

    #[test]
    fn normalized_defect_pair_is_e5() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = e5(3, C64::new(0.0, h), C64::new(h, 0.0));
        let v = random_unitary(3, &mut rng_from_seed(2));
        let sf = staircase_form(&a.conjugate_by(&v), 2, &tol()).unwrap();
        let normal = normalize_staircase(&sf).unwrap();
        assert_eq!(normal.model.rows(), 3);
        assert!((normal.model[(0, 1)] - C64::new(1.0, 0.0)).norm() < 1e-10);
        assert!((normal.model[(1, 2)].norm() - h).abs() < 1e-10);
        assert!((normal.model[(2, 2)].norm() - h).abs() < 1e-10);
    }

    #[test]
    fn rejects_failing_power() {
        let a = Matrix::identity(2).scale_real(0.5);
        assert!(matches!(
            staircase_form(&a, 1, &tol()),
            Err(Error::NotPowerPartialIsometry { power: 1 })
        ));
        let defect = Matrix::from_real_rows(&[&[0.0, 0.6], &[0.0, 0.8]]);
        let a = Matrix::direct_sum(&[&Matrix::jordan(3), &defect]);
        assert!(staircase_form(&a, 1, &tol()).is_ok());
        assert!(matches!(
            staircase_form(&a, 3, &tol()),
            Err(Error::NotPowerPartialIsometry { power: 2 })
        ));
    }

    #[test]
    fn unitary_input_has_no_levels() {
        let u = random_unitary(3, &mut rng_from_seed(1));
        let sf = staircase_form(&u, 2, &tol()).unwrap();
        assert_eq!((sf.k, sf.core_size), (0, 3));
        assert!(sf.assemble().distance(&u) < 1e-12);
    }

    #[test]
    fn halmos_wallen_examples() {
        let a = Matrix::direct_sum(&[&Matrix::jordan(2), &Matrix::identity(1)]);
        let spec = halmos_wallen(&a, &tol()).unwrap();
        assert_eq!(spec.block_sizes, vec![2]);
        assert_eq!(spec.unitary_dim(), 1);
        assert!((spec.unitary_summand.unwrap()[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);

        for n in 1..=5 {
            let spec = halmos_wallen(&Matrix::jordan(n), &tol()).unwrap();
            assert_eq!(spec.block_sizes, vec![n]);
            assert!(spec.unitary_summand.is_none());
        }

        let phase = Matrix::scalar(C64::from_polar(1.0, 0.7));
        let base = Matrix::direct_sum(&[&phase, &Matrix::jordan(3), &Matrix::jordan(1)]);
        let v = random_unitary(5, &mut rng_from_seed(17));
        let spec = halmos_wallen(&base.conjugate_by(&v), &tol()).unwrap();
        assert_eq!(spec.block_sizes, vec![3, 1]);
        assert_eq!(spec.unitary_dim(), 1);
        assert!(spec.residual < 1e-9);
    }

    #[test]
    fn halmos_wallen_requires_infinite_index() {
        let a = e5(4, C64::new(0.6, 0.0), C64::new(0.8, 0.0));
        assert!(matches!(halmos_wallen(&a, &tol()), Err(Error::NotInfiniteIndex { power: 4 })));
    }

    #[test]
    fn classify_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = e5(4, C64::new(h, 0.0), C64::new(h, 0.0));
        match classify_pmax(&a, &tol()).unwrap() {
            PmaxClass::NMinusOne { a_modulus, b_modulus, .. } => {
                assert!((a_modulus - h).abs() < 1e-10 && (b_modulus - h).abs() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(classify_pmax(&Matrix::jordan(4), &tol()).unwrap(), PmaxClass::Infinite));
        let v = serde_json::to_value(classify_pmax(&Matrix::identity(1).scale_real(0.5), &tol()).unwrap()).unwrap();
        assert_eq!(v, serde_json::json!({"class": "P_OTHER", "p": 0}));
    }
}
