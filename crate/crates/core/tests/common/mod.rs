#![allow(dead_code)]

use ppi_core::matkit::random::{random_unitary, rng_from_seed};
use ppi_core::matkit::{rank_tol, Matrix, Tolerance, C64};

pub fn tol() -> Tolerance {
    Tolerance::default()
}

/// `nul A^j` for `j = 0..=n`, from the rank of explicit powers.
pub fn nullities(a: &Matrix, tol: &Tolerance) -> Vec<usize> {
    let n = a.rows();
    let mut out = vec![0];
    let mut p = Matrix::identity(n);
    for _ in 0..n {
        p = p.matmul(a);
        out.push(n - rank_tol(&p, tol).unwrap());
    }
    out
}

/// Jordan block sizes of the eigenvalue 0, largest first, by Weyr duality:
/// the number of blocks of size ≥ j is `nul A^j − nul A^{j−1}`.
pub fn nilpotent_block_sizes(a: &Matrix, tol: &Tolerance) -> Vec<usize> {
    let nul = nullities(a, tol);
    let weyr: Vec<usize> = nul.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sizes = Vec::new();
    for j in (1..=weyr.len()).rev() {
        let at_least = weyr[j - 1];
        let longer = weyr.get(j).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(j, at_least - longer));
    }
    sizes
}

/// `V* (U ⊕ J_{k_1} ⊕ ⋯) V` with a Haar-random `V`.
pub fn hidden_jordan_sum(unitary_phases: &[f64], blocks: &[usize], seed: u64) -> Matrix {
    let mut parts: Vec<Matrix> = unitary_phases
        .iter()
        .map(|&t| Matrix::scalar(C64::from_polar(1.0, t)))
        .collect();
    parts.extend(blocks.iter().map(|&k| Matrix::jordan(k)));
    let refs: Vec<&Matrix> = parts.iter().collect();
    let a = Matrix::direct_sum(&refs);
    let v = random_unitary(a.rows(), &mut rng_from_seed(seed));
    a.conjugate_by(&v)
}

/// Sorted copy, largest first.
pub fn sorted_desc(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Nonincreasing level sizes, `1 ≤ len ≤ max_levels`, summing with the
/// core to at most `max_dim`.
pub fn profile_from_seed(seed: u64, max_levels: usize, max_dim: usize) -> (Vec<usize>, usize) {
    use rand::Rng;
    let mut rng = rng_from_seed(seed);
    loop {
        let k = rng.random_range(1..=max_levels);
        let mut sizes = Vec::with_capacity(k);
        let mut cap = 3;
        for _ in 0..k {
            let s = rng.random_range(1..=cap);
            sizes.push(s);
            cap = s;
        }
        let core = rng.random_range(0..=3);
        if sizes.iter().sum::<usize>() + core <= max_dim {
            return (sizes, core);
        }
    }
}
