//! Replays of the worked examples with fixed parameters.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::isometry::{ascent, ppi_index, PpiIndex};
use crate::matkit::{char_poly, eigenvalues, poly_mul, Matrix, Polynomial, Tolerance, C64};
use crate::numrange::{boundary_points, is_disc_at_origin, Verdict, DISC_SAMPLES};

pub const EXAMPLE_IDS: [&str; 3] = ["2.7", "3.5", "3.6"];
pub const DEFAULT_LAMBDA_FINITE_INDEX: f64 = 0.4;
pub const DEFAULT_LAMBDA_TENSOR_DISC: f64 = 0.6;

const RADIUS_TOL: f64 = 1e-8;
const COEFF_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproResult {
    pub example_id: String,
    pub parameters: BTreeMap<String, f64>,
    pub matrix: Matrix,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

impl ReproResult {
    fn new(id: &str, parameters: BTreeMap<String, f64>, matrix: Matrix, checks: Vec<Check>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Self { example_id: id.to_owned(), parameters, matrix, checks, all_pass }
    }
}

fn check(name: &str, expected: Value, computed: Value, pass: bool) -> Check {
    Check { name: name.to_owned(), expected, computed, pass }
}

fn verdict_name(v: Verdict) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Accepts `2.7` or `example-2.7`.
pub fn repro(example_id: &str, tol: &Tolerance) -> Result<ReproResult> {
    match example_id.trim_start_matches("example-") {
        "2.7" => finite_index_disc(DEFAULT_LAMBDA_FINITE_INDEX, tol),
        "3.5" => tensor_disc(DEFAULT_LAMBDA_TENSOR_DISC, tol),
        "3.6" => tensor_not_disc(tol),
        other => Err(Error::UnknownExample(other.to_owned())),
    }
}

pub fn finite_index_disc_matrix(lambda: f64) -> Matrix {
    let tail = Matrix::from_real_rows(&[&[0.0, (1.0 - lambda * lambda).sqrt()], &[0.0, lambda]]);
    Matrix::direct_sum(&[&Matrix::jordan(3), &tail])
}

/// `J_3 ⊕ [[0, √(1−λ²)], [0, λ]]` for `0 < λ ≤ √2 − 1`.
pub fn finite_index_disc(lambda: f64, tol: &Tolerance) -> Result<ReproResult> {
    if !(lambda > 0.0 && lambda <= std::f64::consts::SQRT_2 - 1.0) {
        return Err(Error::BadParameters(format!("lambda = {lambda} outside (0, sqrt(2) - 1]")));
    }
    let a = finite_index_disc_matrix(lambda);
    let asc = ascent(&a, tol)?;
    let p = ppi_index(&a, tol)?;
    let cert = is_disc_at_origin(&a, tol)?;
    let target = std::f64::consts::FRAC_1_SQRT_2;
    let radius_ok = cert.radius.is_some_and(|r| (r - target).abs() <= RADIUS_TOL);
    let spectral_radius = eigenvalues(&a, tol)?.iter().map(|z| z.norm()).fold(0.0, f64::max);

    let checks = vec![
        check("ascent", json!(3), json!(asc), asc == 3),
        check("ppi_index", json!(PpiIndex::Finite(1)), json!(p), p == PpiIndex::Finite(1)),
        check("wrange_verdict", json!("DISC"), verdict_name(cert.verdict), cert.verdict == Verdict::Disc),
        check("wrange_radius", json!(target), json!(cert.radius), cert.verdict == Verdict::Disc && radius_ok),
        check(
            "nonzero_eigenvalue_excludes_jordan_sum",
            json!(lambda),
            json!(spectral_radius),
            (spectral_radius - lambda).abs() <= 1e-8,
        ),
    ];
    let params = BTreeMap::from([("lambda".to_owned(), lambda)]);
    Ok(ReproResult::new("2.7", params, a, checks))
}

pub fn tensor_disc_matrix(lambda: f64) -> Matrix {
    Matrix::direct_sum(&[&Matrix::scalar(C64::new(lambda, 0.0)), &Matrix::jordan(2)])
}

/// `[λ] ⊕ J_2` for `1/2 < λ ≤ 1/√2`.
pub fn tensor_disc(lambda: f64, tol: &Tolerance) -> Result<ReproResult> {
    if !(lambda > 0.5 && lambda <= std::f64::consts::FRAC_1_SQRT_2) {
        return Err(Error::BadParameters(format!("lambda = {lambda} outside (1/2, 1/sqrt(2)]")));
    }
    let a = tensor_disc_matrix(lambda);
    let tensor = a.kron(&a);
    let square_cert = is_disc_at_origin(&tensor, tol)?;
    let cert = is_disc_at_origin(&a, tol)?;
    let radius_ok = square_cert.radius.is_some_and(|r| (r - 0.5).abs() <= RADIUS_TOL);

    let checks = vec![
        check(
            "tensor_wrange_verdict",
            json!("DISC"),
            verdict_name(square_cert.verdict),
            square_cert.verdict == Verdict::Disc,
        ),
        check(
            "tensor_wrange_radius",
            json!(0.5),
            json!(square_cert.radius),
            square_cert.verdict == Verdict::Disc && radius_ok,
        ),
        check("wrange_verdict", json!("NOT_DISC"), verdict_name(cert.verdict), cert.verdict == Verdict::NotDisc),
    ];
    let params = BTreeMap::from([("lambda".to_owned(), lambda)]);
    Ok(ReproResult::new("3.5", params, a, checks))
}

pub fn tensor_not_disc_matrix() -> Matrix {
    let s = std::f64::consts::SQRT_2;
    Matrix::from_real_rows(&[&[0.0, -s, 1.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, s / 2.0]])
}

/// The factored characteristic polynomial of `2 Re(A ⊗ A)`, expanded;
/// coefficients lowest degree first.
pub fn tensor_not_disc_char_poly() -> Vec<f64> {
    let factors: [&[f64]; 3] = [&[0.0, 0.0, 1.0], &[-3.0, 0.0, 1.0], &[-48.0, 46.0, 17.0, -17.0, -1.0, 1.0]];
    let as_complex = |p: &[f64]| p.iter().map(|&c| C64::new(c, 0.0)).collect::<Vec<_>>();
    let prod = factors[1..]
        .iter()
        .fold(as_complex(factors[0]), |acc, f| poly_mul(&acc, &as_complex(f)));
    prod.iter().map(|c| c.re).collect()
}

/// Quotient of `p` by the monic `d`, both lowest degree first.
fn poly_div(p: &[f64], d: &[f64]) -> Vec<f64> {
    let mut rem = p.to_vec();
    let dn = d.len() - 1;
    let mut q = vec![0.0; rem.len().saturating_sub(dn)];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        for (j, &dj) in d.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    q
}

pub fn tensor_not_disc(tol: &Tolerance) -> Result<ReproResult> {
    let a = tensor_not_disc_matrix();
    let profile = boundary_points(&a, DISC_SAMPLES)?;
    let r_dev = profile.samples.iter().map(|s| (s.r - 1.0).abs()).fold(0.0, f64::max);

    let tensor = a.kron(&a);
    let herm = tensor.rotated_real_part(0.0).scale_real(2.0);
    let computed: Vec<f64> = char_poly(&herm)?.coeffs.iter().map(|c| c.re).collect();
    let expected = tensor_not_disc_char_poly();
    let coeff_dev = expected
        .iter()
        .zip(&computed)
        .map(|(e, c)| (e - c).abs())
        .fold(if expected.len() == computed.len() { 0.0 } else { f64::INFINITY }, f64::max);

    let quintic = poly_div(&computed, &[0.0, 0.0, -3.0, 0.0, 1.0]);
    let at_two = Polynomial::from_real(&quintic).eval(C64::new(2.0, 0.0)).re;

    let cert = is_disc_at_origin(&tensor, tol)?;

    let checks = vec![
        check("support_function_constant_one", json!(0.0), json!(r_dev), r_dev <= RADIUS_TOL),
        check("tensor_char_poly_coefficients", json!(expected), json!(computed), coeff_dev <= COEFF_TOL),
        check("quintic_factor_at_two", json!(-8.0), json!(at_two), (at_two + 8.0).abs() <= COEFF_TOL),
        check("tensor_wrange_verdict", json!("NOT_DISC"), verdict_name(cert.verdict), cert.verdict == Verdict::NotDisc),
    ];
    Ok(ReproResult::new("3.6", BTreeMap::new(), a, checks))
}
