//! Partial isometry predicates and the indices built on them: ascent
//! `a(A)`, the power partial isometry index `p(A)`, unitary-part detection,
//! and a seeded generator of matrices whose first `k` powers are partial
//! isometries.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matkit::random::{random_unitary, rng_from_seed};
use crate::matkit::svd::{null_space, operator_norm, rank_tol, singular_values, svd};
use crate::matkit::{Matrix, Tolerance};

/// `p(A)`: either a finite count or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PpiIndex {
    Finite(usize),
    Infinite,
}

impl PpiIndex {
    pub fn is_infinite(self) -> bool {
        self == PpiIndex::Infinite
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            PpiIndex::Finite(k) => Some(k),
            PpiIndex::Infinite => None,
        }
    }
}

impl fmt::Display for PpiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PpiIndex::Finite(k) => write!(f, "{k}"),
            PpiIndex::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for PpiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PpiIndex::Finite(k) => s.serialize_u64(*k as u64),
            PpiIndex::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PpiIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(k) => Ok(PpiIndex::Finite(k as usize)),
            Raw::Text(t) if t == "inf" => Ok(PpiIndex::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected count or \"inf\", got {t:?}"))),
        }
    }
}

/// Both partial-isometry criteria, measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartialIsometryTest {
    /// `max_i dist(σ_i, {0, 1})`.
    pub sigma_distance: f64,
    /// `‖A·(A*A) − A‖_F`; zero iff `A*A` is idempotent.
    pub projection_residual: f64,
    pub sigma_threshold: f64,
    pub projection_threshold: f64,
}

impl PartialIsometryTest {
    pub fn sigma_pass(&self) -> bool {
        self.sigma_distance <= self.sigma_threshold
    }

    pub fn projection_pass(&self) -> bool {
        self.projection_residual <= self.projection_threshold
    }

    pub fn verdict(&self) -> Result<bool> {
        match (self.sigma_pass(), self.projection_pass()) {
            (a, b) if a == b => Ok(a),
            _ => Err(Error::AmbiguousAtTolerance {
                sigma_distance: self.sigma_distance,
                projection_residual: self.projection_residual,
            }),
        }
    }
}

/// Measures the singular-value and projection criteria for `A`.
///
/// A singular value within `tol.abs·√n` of `{0, 1}` passes. The projection
/// residual contributes `σ|σ² − 1|` per singular value, linear near both 0
/// and 1; its bound `4·tol.abs·n` is met by every matrix passing the first
/// test, so disagreement only occurs at the tolerance cliff.
pub fn partial_isometry_test(a: &Matrix, tol: &Tolerance) -> Result<PartialIsometryTest> {
    let n = a.require_square("is_partial_isometry")?;
    let sigma = singular_values(a)?;
    let sigma_distance = sigma
        .iter()
        .map(|&s| s.abs().min((s - 1.0).abs()))
        .fold(0.0, f64::max);
    let projection_residual = a.matmul(&a.gram()).distance(a);
    let root_n = (n.max(1) as f64).sqrt();
    Ok(PartialIsometryTest {
        sigma_distance,
        projection_residual,
        sigma_threshold: tol.abs * root_n,
        projection_threshold: 4.0 * tol.abs * root_n * root_n,
    })
}

/// `A*A` is an orthogonal projection, decided by two independent criteria.
/// Disagreement is reported as [`Error::AmbiguousAtTolerance`].
pub fn is_partial_isometry(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    partial_isometry_test(a, tol)?.verdict()
}

/// Smallest `k ≥ 0` with `rank A^k = rank A^{k+1}`.
pub fn ascent(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    let n = a.require_square("ascent")?;
    let mut rank_prev = n;
    let mut power = Matrix::identity(n);
    for k in 0..=n {
        power = power.matmul(a);
        let r = rank_tol(&power, tol)?;
        if r == rank_prev {
            return Ok(k);
        }
        rank_prev = r;
    }
    Ok(n)
}

/// Partial-isometry verdicts for `A^1, …, A^{a(A)+1}` together with `a(A)`.
pub fn pi_chain(a: &Matrix, tol: &Tolerance) -> Result<(usize, Vec<bool>)> {
    let asc = ascent(a, tol)?;
    let mut chain = Vec::with_capacity(asc + 1);
    let mut power = a.clone();
    for _ in 1..=(asc + 1) {
        chain.push(is_partial_isometry(&power, tol)?);
        power = power.matmul(a);
    }
    Ok((asc, chain))
}

fn index_from_chain(chain: &[bool]) -> PpiIndex {
    match chain.iter().position(|&ok| !ok) {
        Some(j) => PpiIndex::Finite(j),
        None => PpiIndex::Infinite,
    }
}

/// `p(A) = sup{k : I, A, …, A^k are partial isometries}`.
///
/// Powers `1..=a(A)+1` are tested; if all pass, every power is a partial
/// isometry and the index is infinite.
pub fn ppi_index(a: &Matrix, tol: &Tolerance) -> Result<PpiIndex> {
    let asc = ascent(a, tol)?;
    let mut power = a.clone();
    for j in 1..=(asc + 1) {
        if !is_partial_isometry(&power, tol)? {
            return Ok(PpiIndex::Finite(j - 1));
        }
        power = power.matmul(a);
    }
    Ok(PpiIndex::Infinite)
}

pub fn is_contraction(a: &Matrix, tol: &Tolerance) -> bool {
    operator_norm(a) <= 1.0 + tol.abs
}

/// Orthonormal basis of the largest reducing subspace on which the
/// contraction `A` acts unitarily:
/// `⋂_{j=1..n} ker(I − A^{*j}A^j) ∩ ker(I − A^j A^{*j})`.
pub fn unitary_subspace(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let n = a.require_square("has_unitary_part")?;
    let norm = operator_norm(a);
    if norm > 1.0 + tol.abs {
        return Err(Error::NotAContraction { norm });
    }
    let id = Matrix::identity(n);
    let mut basis = id.clone();
    let mut power = id.clone();
    for _ in 1..=n {
        power = power.matmul(a);
        let defects = [
            &id - &power.adjoint().matmul(&power),
            &id - &power.matmul(&power.adjoint()),
        ];
        for m in &defects {
            if basis.cols() == 0 {
                return Ok(basis);
            }
            let restricted = m.matmul(&basis);
            let kernel = null_space(&restricted, tol)?;
            basis = reorthonormalize(&basis.matmul(&kernel))?;
        }
    }
    Ok(basis)
}

fn reorthonormalize(q: &Matrix) -> Result<Matrix> {
    if q.cols() == 0 {
        return Ok(q.clone());
    }
    let s = svd(q)?;
    let idx: Vec<usize> = (0..q.cols()).collect();
    Ok(s.u.select_columns(&idx))
}

/// True when the contraction `A` has a nonzero reducing subspace on which
/// it is unitary.
pub fn has_unitary_part(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    Ok(unitary_subspace(a, tol)?.cols() > 0)
}

fn check_profile(profile: &[usize]) -> Result<()> {
    if profile.is_empty() {
        return Err(Error::BadProfile("profile must have at least one level".into()));
    }
    if profile.contains(&0) {
        return Err(Error::BadProfile("level sizes must be ≥ 1".into()));
    }
    if profile.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::BadProfile(format!("{profile:?} is not nonincreasing")));
    }
    Ok(())
}

/// Builds the normalized model
///
/// ```text
/// [0 I         ]
/// [  0 ⋱       ]
/// [    ⋱ I     ]   ⊕ (J_{k−1} × (n_{k−1}−n_k)) ⊕ ⋯ ⊕ (J_1 × (n_1−n_2))
/// [      0 B   ]
/// [        C   ]
/// ```
///
/// with `k = profile.len()` identity-staircase levels of width `n_k`.
pub fn ppi_model(profile: &[usize], b: &Matrix, c: &Matrix) -> Result<Matrix> {
    check_profile(profile)?;
    let k = profile.len();
    let width = profile[k - 1];
    let m = c.rows();
    if b.rows() != width || b.cols() != m || !c.is_square() {
        return Err(Error::Dimension(format!(
            "B must be {width}×{m} and C {m}×{m}, got {}×{} and {}×{}",
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let head_dim = k * width + m;
    let mut head = Matrix::zeros(head_dim, head_dim);
    let eye = Matrix::identity(width);
    for level in 0..k.saturating_sub(1) {
        head.set_block(level * width, (level + 1) * width, &eye);
    }
    head.set_block((k - 1) * width, k * width, b);
    head.set_block(k * width, k * width, c);

    let mut blocks = vec![head];
    for j in (1..k).rev() {
        for _ in 0..(profile[j - 1] - profile[j]) {
            blocks.push(Matrix::jordan(j));
        }
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Ok(Matrix::direct_sum(&refs))
}

/// A generated power partial isometry together with its model and the
/// unitary used to hide it (`matrix = V* · model · V`).
#[derive(Clone, Debug)]
pub struct PpiSample {
    pub matrix: Matrix,
    pub model: Matrix,
    pub conjugator: Matrix,
    pub b: Matrix,
    pub c: Matrix,
}

const DEFECT_FLOOR: f64 = 0.05;

/// Random matrix whose powers `A, …, A^k` are partial isometries, with
/// level sizes `profile = (n_1 ≥ … ≥ n_k)` and core size `m`.
///
/// `[B; C]` are the first `m` columns of a random unitary; samples with
/// `‖B‖` or `σ_min(C)` below 0.05 are redrawn so that `B, C ≠ 0` and the
/// level structure is numerically well separated.
pub fn random_ppi_sample(profile: &[usize], core: usize, seed: u64) -> Result<PpiSample> {
    check_profile(profile)?;
    let mut rng = rng_from_seed(seed);
    let width = profile[profile.len() - 1];
    let (b, c) = loop {
        let u = random_unitary(width + core, &mut rng);
        let cols: Vec<usize> = (0..core).collect();
        let bc = u.select_columns(&cols);
        let b = bc.block(0, 0, width, core);
        let c = bc.block(width, 0, core, core);
        if core == 0 {
            break (b, c);
        }
        let b_norm = operator_norm(&b);
        let c_min = singular_values(&c)?.last().copied().unwrap_or(0.0);
        if b_norm >= DEFECT_FLOOR && c_min >= DEFECT_FLOOR {
            break (b, c);
        }
    };
    let model = ppi_model(profile, &b, &c)?;
    let v = random_unitary(model.rows(), &mut rng);
    Ok(PpiSample {
        matrix: model.conjugate_by(&v),
        model,
        conjugator: v,
        b,
        c,
    })
}

pub fn random_ppi(profile: &[usize], core: usize, seed: u64) -> Result<Matrix> {
    Ok(random_ppi_sample(profile, core, seed)?.matrix)
}

/// Per-matrix verdicts produced by `ppi analyze`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub ascent: usize,
    pub ppi_index: PpiIndex,
    /// Partial-isometry verdicts for `A^1 … A^J`, `J = min(a(A)+1, n+1)`.
    pub is_pi_chain: Vec<bool>,
    /// `None` when `A` is not a contraction.
    pub has_unitary_part: Option<bool>,
    pub norm: f64,
}

pub fn analyze(a: &Matrix, tol: &Tolerance) -> Result<AnalysisReport> {
    let n = a.require_square("analyze")?;
    let (asc, chain) = pi_chain(a, tol)?;
    let norm = operator_norm(a);
    let has_unitary_part = if norm <= 1.0 + tol.abs {
        Some(has_unitary_part(a, tol)?)
    } else {
        None
    };
    Ok(AnalysisReport {
        n,
        ascent: asc,
        ppi_index: index_from_chain(&chain),
        is_pi_chain: chain,
        has_unitary_part,
        norm,
    })
}
