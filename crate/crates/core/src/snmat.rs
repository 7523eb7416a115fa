//! S_n-matrices (contractions with spectrum in the open unit disc and
//! `rank(I − A*A) = 1`), their construction from eigenvalues, the index
//! structure they force, searches for prescribed `(p(A), a(A))`, and the
//! behaviour of both indices under Kronecker products.

use rand::Rng;
use serde::Serialize;

use crate::canon::halmos_wallen;
use crate::error::{Error, Result};
use crate::isometry::{ascent, has_unitary_part, is_partial_isometry, ppi_index, ppi_model, PpiIndex};
use crate::matkit::random::{random_unitary, rng_from_seed, MatrixRng};
use crate::matkit::svd::{operator_norm, rank_tol};
use crate::matkit::{eigenvalues, hermitian_eig, multiset_distance, Matrix, Tolerance, C64, ZERO};
use crate::numrange::{is_disc_at_origin, Verdict};

/// Radius used to pair prescribed and computed eigenvalues.
pub const EIGEN_MATCH_TOL: f64 = 1e-7;

/// Index structure of a noninvertible S_n-matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexStructure {
    pub ascent: usize,
    pub zero_multiplicity: usize,
    pub ascent_equals_multiplicity: bool,
    pub ppi_index: PpiIndex,
    pub index_is_ascent_or_infinite: bool,
    /// Jordan block sizes when every power is a partial isometry.
    pub jordan_blocks: Option<Vec<usize>>,
    /// `p(A) = ∞` exactly when `A ≅ J_n`.
    pub infinite_iff_single_block: bool,
    /// `rank A^j` for `j = 1..=a(A)`.
    pub rank_sequence: Vec<usize>,
    pub rank_sequence_ok: bool,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SnReport {
    pub n: usize,
    pub is_contraction: bool,
    pub norm: f64,
    pub eigenvalues: Vec<C64>,
    pub eigenvalues_in_open_disc: bool,
    /// `rank(I − A*A)`.
    pub defect_rank: usize,
    pub is_sn: bool,
    pub zero_multiplicity: usize,
    /// Present for noninvertible S_n-matrices.
    pub index_structure: Option<IndexStructure>,
}

/// Evaluates the three defining conditions of the class S_n separately.
///
/// For contractions an eigenvalue on the unit circle is equivalent to a
/// unitary summand, so the open-disc condition is decided through
/// [`has_unitary_part`] rather than by root moduli.
pub fn is_sn(a: &Matrix, tol: &Tolerance) -> Result<SnReport> {
    let n = a.require_square("is_sn")?;
    let norm = operator_norm(a);
    let is_contraction = norm <= 1.0 + tol.abs;
    let eigs = eigenvalues(a, tol)?;
    let in_disc = if is_contraction {
        n > 0 && !has_unitary_part(a, tol)?
    } else {
        eigs.iter().all(|z| z.norm() < 1.0 - tol.abs)
    };
    let defect = &Matrix::identity(n) - &a.gram();
    let defect_rank = rank_tol(&defect, tol)?;
    let zero_multiplicity = crate::matkit::zero_multiplicity(a, tol)?;
    let is_sn = is_contraction && in_disc && defect_rank == 1;
    let index_structure = if is_sn && zero_multiplicity > 0 {
        Some(index_structure(a, zero_multiplicity, tol)?)
    } else {
        None
    };
    Ok(SnReport {
        n,
        is_contraction,
        norm,
        eigenvalues: eigs,
        eigenvalues_in_open_disc: in_disc,
        defect_rank,
        is_sn,
        zero_multiplicity,
        index_structure,
    })
}

fn index_structure(a: &Matrix, zero_multiplicity: usize, tol: &Tolerance) -> Result<IndexStructure> {
    let n = a.rows();
    let asc = ascent(a, tol)?;
    let p = ppi_index(a, tol)?;
    let jordan_blocks = if p.is_infinite() {
        let spec = halmos_wallen(a, tol)?;
        spec.unitary_summand.is_none().then_some(spec.block_sizes)
    } else {
        None
    };
    let single = jordan_blocks.as_deref() == Some(&[n][..]);
    let infinite_iff_single_block = p.is_infinite() == single && p.is_infinite() == (zero_multiplicity == n);

    let mut rank_sequence = Vec::with_capacity(asc);
    let mut power = a.clone();
    for _ in 1..=asc {
        rank_sequence.push(rank_tol(&power, tol)?);
        power = power.matmul(a);
    }
    let rank_sequence_ok = rank_sequence.iter().enumerate().all(|(j, &r)| r == n - (j + 1));
    let ascent_equals_multiplicity = asc == zero_multiplicity;
    let index_is_ascent_or_infinite = p == PpiIndex::Finite(asc) || p.is_infinite();
    Ok(IndexStructure {
        ascent: asc,
        zero_multiplicity,
        ascent_equals_multiplicity,
        ppi_index: p,
        index_is_ascent_or_infinite,
        jordan_blocks,
        infinite_iff_single_block,
        rank_sequence,
        rank_sequence_ok,
        all_pass: ascent_equals_multiplicity
            && index_is_ascent_or_infinite
            && infinite_iff_single_block
            && rank_sequence_ok,
    })
}

/// Verifies the index structure of a noninvertible S_n-matrix: `a(A)` is the
/// algebraic multiplicity of 0, `p(A) ∈ {a(A), ∞}`, `p(A) = ∞` iff `A ≅ J_n`,
/// and `rank A^j = n − j` for `1 ≤ j ≤ a(A)`.
pub fn check_index_structure(a: &Matrix, tol: &Tolerance) -> Result<SnReport> {
    let report = is_sn(a, tol)?;
    if !report.is_sn {
        return Err(Error::NotSn(format!(
            "contraction: {}, spectrum in open disc: {}, defect rank: {}",
            report.is_contraction, report.eigenvalues_in_open_disc, report.defect_rank
        )));
    }
    if report.zero_multiplicity == 0 {
        return Err(Error::Invertible);
    }
    Ok(report)
}

/// Upper-triangular S_n-matrix with diagonal `lams`:
///
/// `A_ij = ∏_{k=i+1}^{j−1} (−λ̄_k) · √(1−|λ_i|²) · √(1−|λ_j|²)` for `i < j`.
///
/// The result is checked against [`is_sn`] and the prescribed spectrum
/// before it is returned.
pub fn sn_from_eigenvalues(lams: &[C64], tol: &Tolerance) -> Result<Matrix> {
    if let Some(bad) = lams.iter().find(|z| !(z.norm() < 1.0)) {
        return Err(Error::BadParameters(format!("eigenvalue {bad} is not in the open unit disc")));
    }
    let n = lams.len();
    let d: Vec<f64> = lams.iter().map(|z| (1.0 - z.norm_sqr()).sqrt()).collect();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = lams[i];
        let mut prod = C64::new(1.0, 0.0);
        for j in (i + 1)..n {
            a[(i, j)] = prod * d[i] * d[j];
            prod *= -lams[j].conj();
        }
    }
    validate_spectrum(&a, lams, tol)?;
    Ok(a)
}

fn validate_spectrum(a: &Matrix, lams: &[C64], tol: &Tolerance) -> Result<()> {
    let n = lams.len();
    let report = is_sn(a, tol)?;
    if !report.is_sn {
        return Err(Error::ConstructionFailedValidation(format!(
            "output is not S_n (contraction {}, open disc {}, defect rank {})",
            report.is_contraction, report.eigenvalues_in_open_disc, report.defect_rank
        )));
    }
    let zeros = lams.iter().filter(|z| **z == ZERO).count();
    if report.zero_multiplicity != zeros {
        return Err(Error::ConstructionFailedValidation(format!(
            "zero eigenvalue multiplicity {} instead of {zeros}",
            report.zero_multiplicity
        )));
    }

    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for &z in lams {
        match clusters.iter_mut().find(|(c, _)| (c - z).norm() <= 1e-12) {
            Some(entry) => entry.1 += 1,
            None => clusters.push((z, 1)),
        }
    }
    if clusters.iter().all(|&(c, mult)| mult == 1 || c == ZERO) {
        let dist = multiset_distance(&report.eigenvalues, lams).unwrap_or(f64::INFINITY);
        if dist > EIGEN_MATCH_TOL {
            return Err(Error::ConstructionFailedValidation(format!(
                "eigenvalues differ from the prescribed ones by {dist:e}"
            )));
        }
        return Ok(());
    }
    // Repeated nonzero eigenvalues: each sits in a single Jordan block, so
    // its multiplicity μ is pinned by nul (A − λ)^μ = nul (A − λ)^{μ+1} = μ.
    let id = Matrix::identity(n);
    for &(lam, mult) in &clusters {
        let shifted = &*a - &id.scale(lam);
        let p = shifted.power(mult);
        let nul_mu = n - rank_tol(&p, tol)?;
        let nul_next = n - rank_tol(&p.matmul(&shifted), tol)?;
        if nul_mu != mult || nul_next != mult {
            return Err(Error::ConstructionFailedValidation(format!(
                "eigenvalue {lam} has kernel dimensions ({nul_mu}, {nul_next}) instead of {mult}"
            )));
        }
    }
    Ok(())
}

/// Noninvertible S_n-matrix with `p(A) = a(A) = j`: `j` zero eigenvalues and
/// `n − j` equally spaced points on the circle of radius 1/2.
pub fn construct_pq(n: usize, j: usize, tol: &Tolerance) -> Result<Matrix> {
    if j == 0 || j >= n {
        return Err(Error::BadParameters(format!("need 1 ≤ j ≤ n − 1, got n = {n}, j = {j}")));
    }
    let m = n - j;
    let mut lams = vec![ZERO; j];
    lams.extend((0..m).map(|t| C64::from_polar(0.5, std::f64::consts::TAU * t as f64 / m as f64)));
    let a = sn_from_eigenvalues(&lams, tol)?;
    let p = ppi_index(&a, tol)?;
    let asc = ascent(&a, tol)?;
    if p != PpiIndex::Finite(j) || asc != j {
        return Err(Error::ConstructionFailedValidation(format!(
            "expected p = a = {j}, got p = {p}, a = {asc}"
        )));
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// `J_k ⊕ B` with `B` an S_{n−k} matrix with `p(B) = j`.
    Construction,
    /// `J_k ⊕ B` with random nonzero spectrum for `B`.
    DirectSum,
    /// Staircase with `j` isometric levels over a core carrying a scaled
    /// nilpotent block.
    Staircase,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub status: &'static str,
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub trials_run: usize,
    pub method: Option<SearchMethod>,
    /// Index of the successful randomized trial.
    pub trial: Option<usize>,
    pub witness: Option<Matrix>,
    pub ppi_index: Option<PpiIndex>,
    pub ascent: Option<usize>,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Looks for an `n × n` matrix with `p(A) = j` and `a(A) = k`.
///
/// For `2k < n` the witness is `J_k ⊕ construct_pq(n − k, j)`. Otherwise up
/// to `trials` random candidates from structured families are drawn from
/// `seed` and the first verified one is returned.
pub fn search_pa(n: usize, j: usize, k: usize, trials: usize, seed: u64, tol: &Tolerance) -> Result<SearchOutcome> {
    if !(1 <= j && j <= k && k < n) {
        return Err(Error::BadParameters(format!(
            "need 1 ≤ j ≤ k ≤ n − 1, got n = {n}, j = {j}, k = {k}"
        )));
    }
    let mut outcome = SearchOutcome {
        status: "NOT_FOUND",
        n,
        j,
        k,
        trials_run: 0,
        method: None,
        trial: None,
        witness: None,
        ppi_index: None,
        ascent: None,
    };
    let verify = |a: &Matrix| -> Result<Option<(PpiIndex, usize)>> {
        let asc = ascent(a, tol)?;
        if asc != k {
            return Ok(None);
        }
        let p = ppi_index(a, tol)?;
        Ok((p == PpiIndex::Finite(j)).then_some((p, asc)))
    };

    if 2 * k < n {
        let b = construct_pq(n - k, j, tol)?;
        let a = Matrix::direct_sum(&[&Matrix::jordan(k), &b]);
        let (p, asc) = verify(&a)?.ok_or_else(|| {
            Error::ConstructionFailedValidation(format!("J_{k} ⊕ B does not have p = {j}, a = {k}"))
        })?;
        outcome.status = "FOUND";
        outcome.method = Some(SearchMethod::Construction);
        outcome.witness = Some(a);
        outcome.ppi_index = Some(p);
        outcome.ascent = Some(asc);
        return Ok(outcome);
    }

    let mut rng = rng_from_seed(seed);
    for trial in 0..trials {
        outcome.trials_run = trial + 1;
        let use_sum = n - k > j && trial % 2 == 0;
        let candidate = if use_sum {
            direct_sum_candidate(n, j, k, &mut rng, tol)
        } else {
            staircase_candidate(n, j, k, &mut rng, tol)
        };
        let Some(base) = candidate else { continue };
        let v = random_unitary(n, &mut rng);
        let a = base.conjugate_by(&v);
        // Candidates near a tolerance cliff are skipped, not reported.
        let Ok(Some((p, asc))) = verify(&a) else { continue };
        outcome.status = "FOUND";
        outcome.method = Some(if use_sum {
            SearchMethod::DirectSum
        } else {
            SearchMethod::Staircase
        });
        outcome.trial = Some(trial);
        outcome.witness = Some(a);
        outcome.ppi_index = Some(p);
        outcome.ascent = Some(asc);
        return Ok(outcome);
    }
    Ok(outcome)
}

fn direct_sum_candidate(n: usize, j: usize, k: usize, rng: &mut MatrixRng, tol: &Tolerance) -> Option<Matrix> {
    let m = n - k;
    let mut lams = vec![ZERO; j];
    for _ in j..m {
        let r = rng.random_range(0.15..0.9);
        lams.push(C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU)));
    }
    let b = sn_from_eigenvalues(&lams, tol).ok()?;
    Some(Matrix::direct_sum(&[&Matrix::jordan(k), &b]))
}

/// `j` isometric staircase levels over a core `C = V*(s·J_r ⊕ D)V` with
/// `r = k − j` and `B = X (I − C*C)^{1/2}`, so that `A, …, A^j` are partial
/// isometries and `a(A) = j + r`.
fn staircase_candidate(n: usize, j: usize, k: usize, rng: &mut MatrixRng, tol: &Tolerance) -> Option<Matrix> {
    let r = k - j;
    let floor = r.max(1);
    let width = rng.random_range(1..=(n - floor) / j);
    let mut sizes = vec![width; j];
    let mut budget = n - floor - j * width;
    let mut prev = 2;
    for size in sizes.iter_mut().take(j - 1) {
        let extra = rng.random_range(0..=budget.min(prev));
        *size += extra;
        budget -= extra;
        prev = extra;
    }
    let m = n.checked_sub(sizes.iter().sum())?;
    if m < r.max(1) {
        return None;
    }

    let s = if rng.random_bool(0.5) { 1.0 } else { rng.random_range(0.3..0.95) };
    let nil = Matrix::jordan(r).scale_real(s);
    let dim_d = m - r;
    let sigma: Vec<C64> = (0..dim_d)
        .map(|_| {
            let x = if rng.random_bool(0.4) { 1.0 } else { rng.random_range(0.2..0.95) };
            C64::new(x, 0.0)
        })
        .collect();
    let d = random_unitary(dim_d, rng)
        .matmul(&Matrix::diag(&sigma))
        .matmul(&random_unitary(dim_d, rng).adjoint());
    let core_v = random_unitary(m, rng);
    let c = Matrix::direct_sum(&[&nil, &d]).conjugate_by(&core_v.adjoint());

    let defect = &Matrix::identity(m) - &c.gram();
    let eig = hermitian_eig(&defect.hermitian_part(), tol).ok()?;
    let thr = tol.rank_threshold(eig.max().abs());
    let keep: Vec<usize> = (0..m).filter(|&i| eig.values[i] > thr).collect();
    if keep.len() > width {
        return None;
    }
    let q = eig.vectors.select_columns(&keep);
    let roots: Vec<C64> = keep.iter().map(|&i| C64::new(eig.values[i].sqrt(), 0.0)).collect();
    let half = Matrix::diag(&roots).matmul(&q.adjoint());
    let x = random_unitary(width, rng).select_columns(&(0..keep.len()).collect::<Vec<_>>());
    let b = x.matmul(&half);
    ppi_model(&sizes, &b, &c).ok()
}

/// Verdicts for one law, with the rule as stated and the rule that holds
/// in general.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AscentLaw {
    pub a_left: usize,
    pub a_right: usize,
    pub a_product: usize,
    /// `min{a(A), a(B)}`, or the other ascent when one of them is 0.
    pub stated: usize,
    /// `max{min{a(A), a(B)}, a(A)·[B not nilpotent], a(B)·[A not nilpotent]}`.
    pub corrected: usize,
    /// Each factor is invertible or nilpotent, where the stated rule is exact.
    pub stated_applies: bool,
    pub stated_matches: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductLaw {
    pub left_pi: bool,
    pub right_pi: bool,
    pub product_pi: bool,
    /// Both partial isometries imply the product is one.
    pub holds: bool,
    /// The product is a partial isometry although a factor is not.
    pub converse_fails: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexLaw {
    pub p_left: PpiIndex,
    pub p_right: PpiIndex,
    pub p_product: PpiIndex,
    /// `min{p(A), p(B)}`.
    pub stated: PpiIndex,
    /// With first failures `f = p + 1` and nilpotency indices `ν`:
    /// `min f − 1` if `min f < min ν`, else ∞.
    pub corrected: PpiIndex,
    /// Neither factor is nilpotent, where the stated rule is exact.
    pub stated_applies: bool,
    pub stated_matches: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTensorLaw {
    pub pi: bool,
    pub square_pi: bool,
    pub p: PpiIndex,
    pub p_square: PpiIndex,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorLawReport {
    pub ascent: AscentLaw,
    pub product: ProductLaw,
    /// `None` unless both factors are contractions.
    pub contraction_equivalence: Option<bool>,
    /// `None` unless both factors are contractions.
    pub index: Option<IndexLaw>,
    pub self_tensor: SelfTensorLaw,
    pub all_hold: bool,
}

fn nilpotency_index(a: &Matrix, asc: usize, tol: &Tolerance) -> Result<Option<usize>> {
    let is_nilpotent = a.rows() == 0 || rank_tol(&a.power(asc), tol)? == 0;
    Ok(is_nilpotent.then_some(asc))
}

fn first_failure(p: PpiIndex) -> Option<usize> {
    p.finite().map(|k| k + 1)
}

fn min_opt(x: Option<usize>, y: Option<usize>) -> Option<usize> {
    match (x, y) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Evaluates the Kronecker-product laws for ascent, partial isometries and
/// the index on the pair `(A, B)`; the self-product law uses `A` only.
///
/// The ascent and index rules are reported both in their familiar min-form
/// and in the general form that stays valid when a factor is singular but
/// not nilpotent (ascent) or has a vanishing power (index).
pub fn tensor_laws(a: &Matrix, b: &Matrix, tol: &Tolerance) -> Result<TensorLawReport> {
    a.require_square("tensor_laws")?;
    b.require_square("tensor_laws")?;
    let ab = a.kron(b);

    let (aa, ab_asc, ba) = (ascent(a, tol)?, ascent(&ab, tol)?, ascent(b, tol)?);
    let (nu_a, nu_b) = (nilpotency_index(a, aa, tol)?, nilpotency_index(b, ba, tol)?);
    let stated = match (aa, ba) {
        (x, 0) => x,
        (0, y) => y,
        (x, y) => x.min(y),
    };
    let corrected = aa
        .min(ba)
        .max(if nu_b.is_none() { aa } else { 0 })
        .max(if nu_a.is_none() { ba } else { 0 });
    let stated_applies = (aa == 0 || nu_a.is_some()) && (ba == 0 || nu_b.is_some());
    let ascent_law = AscentLaw {
        a_left: aa,
        a_right: ba,
        a_product: ab_asc,
        stated,
        corrected,
        stated_applies,
        stated_matches: stated == ab_asc,
        holds: corrected == ab_asc,
    };

    let (left_pi, right_pi, product_pi) = (
        is_partial_isometry(a, tol)?,
        is_partial_isometry(b, tol)?,
        is_partial_isometry(&ab, tol)?,
    );
    let product = ProductLaw {
        left_pi,
        right_pi,
        product_pi,
        holds: !(left_pi && right_pi) || product_pi,
        converse_fails: product_pi && !(left_pi && right_pi),
    };

    let contractions = operator_norm(a) <= 1.0 + tol.abs && operator_norm(b) <= 1.0 + tol.abs;
    let nonzero = a.max_abs() > tol.abs && b.max_abs() > tol.abs;
    let contraction_equivalence = (contractions && nonzero).then_some(product_pi == (left_pi && right_pi));
    let index = if contractions && nonzero {
        let (pa, pb, pab) = (ppi_index(a, tol)?, ppi_index(b, tol)?, ppi_index(&ab, tol)?);
        let fail = min_opt(first_failure(pa), first_failure(pb));
        let vanish = min_opt(nu_a, nu_b);
        let corrected = match (fail, vanish) {
            (Some(f), Some(v)) if f < v => PpiIndex::Finite(f - 1),
            (Some(f), None) => PpiIndex::Finite(f - 1),
            _ => PpiIndex::Infinite,
        };
        let stated = pa.min(pb);
        Some(IndexLaw {
            p_left: pa,
            p_right: pb,
            p_product: pab,
            stated,
            corrected,
            stated_applies: nu_a.is_none() && nu_b.is_none(),
            stated_matches: stated == pab,
            holds: corrected == pab,
        })
    } else {
        None
    };

    let aa_sq = a.kron(a);
    let (p, p_square) = (ppi_index(a, tol)?, ppi_index(&aa_sq, tol)?);
    let square_pi = is_partial_isometry(&aa_sq, tol)?;
    let self_tensor = SelfTensorLaw {
        pi: left_pi,
        square_pi,
        p,
        p_square,
        holds: left_pi == square_pi && p == p_square,
    };

    let all_hold = ascent_law.holds
        && product.holds
        && contraction_equivalence.unwrap_or(true)
        && index.as_ref().is_none_or(|l| l.holds)
        && self_tensor.holds;
    Ok(TensorLawReport {
        ascent: ascent_law,
        product,
        contraction_equivalence,
        index,
        self_tensor,
        all_hold,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscCondition {
    pub holds: bool,
    pub verdict: Verdict,
    pub radius: Option<f64>,
}

/// For an S_n-matrix the conditions "W(A) is a disc at 0", "W(A ⊗ A) is a
/// disc at 0" and "A ≅ J_n" are equivalent; each is evaluated on its own.
#[derive(Clone, Debug, Serialize)]
pub struct DiscEquivalenceReport {
    pub n: usize,
    pub range_is_disc: DiscCondition,
    pub square_range_is_disc: DiscCondition,
    pub similar_to_shift: bool,
    pub ppi_index: PpiIndex,
    pub agree: bool,
}

pub fn sn_disc_equivalence(a: &Matrix, tol: &Tolerance) -> Result<DiscEquivalenceReport> {
    let n = a.require_square("sn_disc_equivalence")?;
    let report = is_sn(a, tol)?;
    if !report.is_sn {
        return Err(Error::NotSn(format!(
            "contraction: {}, spectrum in open disc: {}, defect rank: {}",
            report.is_contraction, report.eigenvalues_in_open_disc, report.defect_rank
        )));
    }
    let condition = |m: &Matrix| -> Result<DiscCondition> {
        let cert = is_disc_at_origin(m, tol)?;
        Ok(DiscCondition {
            holds: cert.verdict == Verdict::Disc,
            verdict: cert.verdict,
            radius: cert.radius,
        })
    };
    let range_is_disc = condition(a)?;
    let square_range_is_disc = condition(&a.kron(a))?;
    let p = ppi_index(a, tol)?;
    let similar_to_shift = p.is_infinite() && {
        let spec = halmos_wallen(a, tol)?;
        spec.unitary_summand.is_none() && spec.block_sizes == [n]
    };
    let decided = range_is_disc.verdict != Verdict::Inconclusive && square_range_is_disc.verdict != Verdict::Inconclusive;
    let agree = decided && range_is_disc.holds == similar_to_shift && square_range_is_disc.holds == similar_to_shift;
    Ok(DiscEquivalenceReport {
        n,
        range_is_disc,
        square_range_is_disc,
        similar_to_shift,
        ppi_index: p,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        assert!(is_sn(&Matrix::jordan(4), &tol()).unwrap().is_sn);
        let u = random_unitary(3, &mut rng_from_seed(2));
        let r = is_sn(&u, &tol()).unwrap();
        assert!(!r.is_sn && r.defect_rank == 0);
        let r = is_sn(&Matrix::identity(3), &tol()).unwrap();
        assert!(!r.is_sn && !r.eigenvalues_in_open_disc && r.defect_rank == 0);
    }

    #[test]
    fn zero_spectrum_gives_shift() {
        for n in 1..=6 {
            let a = sn_from_eigenvalues(&vec![ZERO; n], &tol()).unwrap();
            assert_eq!(a, Matrix::jordan(n));
        }
    }

    #[test]
    fn constructor_examples() {
        let a = sn_from_eigenvalues(&[ZERO, ZERO, c(0.5, 0.0)], &tol()).unwrap();
        let r = is_sn(&a, &tol()).unwrap();
        assert!(r.is_sn);
        assert_eq!(r.zero_multiplicity, 2);

        let a = sn_from_eigenvalues(&[c(0.3, 0.0)], &tol()).unwrap();
        assert_eq!(a[(0, 0)], c(0.3, 0.0));
        assert_eq!(is_sn(&a, &tol()).unwrap().defect_rank, 1);

        let rep = [c(0.4, 0.2); 3];
        let a = sn_from_eigenvalues(&rep, &tol()).unwrap();
        assert!(is_sn(&a, &tol()).unwrap().is_sn);

        assert!(matches!(sn_from_eigenvalues(&[c(1.0, 0.0)], &tol()), Err(Error::BadParameters(_))));
    }

    #[test]
    fn index_structure_examples() {
        let r = check_index_structure(&Matrix::jordan(5), &tol()).unwrap();
        let s = r.index_structure.unwrap();
        assert!(s.all_pass);
        assert_eq!(s.ppi_index, PpiIndex::Infinite);
        assert_eq!(s.jordan_blocks, Some(vec![5]));

        let a = sn_from_eigenvalues(&[ZERO, ZERO, c(0.5, 0.0)], &tol()).unwrap();
        let s = check_index_structure(&a, &tol()).unwrap().index_structure.unwrap();
        assert!(s.all_pass);
        assert_eq!((s.ppi_index, s.ascent), (PpiIndex::Finite(2), 2));

        let a = sn_from_eigenvalues(&[ZERO, c(0.4, 0.0), c(0.7, 0.0)], &tol()).unwrap();
        let s = check_index_structure(&a, &tol()).unwrap().index_structure.unwrap();
        assert_eq!(s.rank_sequence, vec![2]);

        let inv = sn_from_eigenvalues(&[c(0.4, 0.0), c(0.7, 0.0)], &tol()).unwrap();
        assert!(matches!(check_index_structure(&inv, &tol()), Err(Error::Invertible)));
        assert!(matches!(check_index_structure(&Matrix::identity(2), &tol()), Err(Error::NotSn(_))));
    }

    #[test]
    fn construct_pq_examples() {
        for (n, j) in [(5, 2), (3, 1), (4, 3)] {
            let a = construct_pq(n, j, &tol()).unwrap();
            assert_eq!(ppi_index(&a, &tol()).unwrap(), PpiIndex::Finite(j));
        }
        assert!(matches!(construct_pq(4, 4, &tol()), Err(Error::BadParameters(_))));
        assert!(matches!(construct_pq(4, 0, &tol()), Err(Error::BadParameters(_))));
    }

    #[test]
    fn search_construction_regime() {
        for (n, j, k) in [(6, 2, 2), (7, 1, 3), (4, 1, 1)] {
            let out = search_pa(n, j, k, 0, 0, &tol()).unwrap();
            assert_eq!(out.method, Some(SearchMethod::Construction));
            assert_eq!(out.ppi_index, Some(PpiIndex::Finite(j)));
            assert_eq!(out.ascent, Some(k));
        }
    }

    #[test]
    fn search_random_regime_is_seeded() {
        let a = search_pa(4, 1, 2, 50, 7, &tol()).unwrap();
        let b = search_pa(4, 1, 2, 50, 7, &tol()).unwrap();
        assert!(a.found());
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.ascent, Some(2));
        let out = search_pa(4, 2, 2, 200, 3, &tol()).unwrap();
        assert!(out.found(), "{out:?}");
        assert!(matches!(search_pa(4, 3, 2, 1, 0, &tol()), Err(Error::BadParameters(_))));
    }

    #[test]
    fn documented_converse_counterexample() {
        let a = Matrix::scalar(c(2.0, 0.0));
        let b = Matrix::scalar(c(0.5, 0.0));
        let r = tensor_laws(&a, &b, &tol()).unwrap();
        assert!(r.product.converse_fails);
        assert!(r.index.is_none());
    }

    #[test]
    fn ascent_law_examples() {
        let r = tensor_laws(&Matrix::jordan(2), &Matrix::jordan(3), &tol()).unwrap();
        assert_eq!(r.ascent.a_product, 2);
        assert!(r.ascent.holds && r.ascent.stated_matches);

        let phase = Matrix::scalar(C64::from_polar(1.0, 0.4));
        let r = tensor_laws(&Matrix::jordan(2), &phase, &tol()).unwrap();
        assert_eq!(r.ascent.a_product, 2);
        assert!(r.all_hold);
    }

    #[test]
    fn stated_rules_fail_outside_their_domain() {
        // Singular but not nilpotent factor: ascent is the larger one.
        let a = Matrix::direct_sum(&[&Matrix::jordan(2), &Matrix::identity(1)]);
        let r = tensor_laws(&a, &Matrix::jordan(3), &tol()).unwrap();
        assert_eq!((r.ascent.a_product, r.ascent.stated), (3, 2));
        assert!(!r.ascent.stated_applies && r.ascent.holds);

        // A vanishing power hides the other factor's failure.
        let b = Matrix::direct_sum(&[&Matrix::jordan(3), &Matrix::from_real_rows(&[&[0.0, 0.6], &[0.0, 0.8]])]);
        let r = tensor_laws(&Matrix::jordan(2), &b, &tol()).unwrap();
        let law = r.index.unwrap();
        assert_eq!(law.p_right, PpiIndex::Finite(1));
        assert_eq!(law.p_product, PpiIndex::Infinite);
        assert!(!law.stated_matches && law.holds);
    }

    #[test]
    fn disc_equivalence_examples() {
        let r = sn_disc_equivalence(&Matrix::jordan(4), &tol()).unwrap();
        assert!(r.agree && r.similar_to_shift && r.range_is_disc.holds && r.square_range_is_disc.holds);

        let a = sn_from_eigenvalues(&[ZERO, c(0.3, 0.0), c(0.0, 0.5)], &tol()).unwrap();
        let r = sn_disc_equivalence(&a, &tol()).unwrap();
        assert!(r.agree && !r.similar_to_shift && !r.range_is_disc.holds);
    }
}
