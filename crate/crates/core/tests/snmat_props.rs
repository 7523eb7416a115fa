mod common;

use common::{hidden_jordan_sum, profile_from_seed, tol};
use ppi_core::isometry::{ascent, is_partial_isometry, ppi_index, random_ppi, PpiIndex};
use ppi_core::matkit::random::{random_contraction, random_in_disc, random_unitary, rng_from_seed};
use ppi_core::matkit::{eigenvalues, multiset_distance, rank_tol, Matrix, C64};
use ppi_core::snmat::{check_index_structure, construct_pq, is_sn, sn_disc_equivalence, sn_from_eigenvalues};
use proptest::prelude::*;
use rand::Rng;

/// Spectrum with `zeros` zero eigenvalues and the rest uniform in `|z| < 0.9`.
fn random_spectrum(n: usize, zeros: usize, seed: u64) -> Vec<C64> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|i| if i < zeros { C64::new(0.0, 0.0) } else { random_in_disc(0.9, &mut rng) })
        .collect()
}

fn hidden(a: &Matrix, seed: u64) -> Matrix {
    a.conjugate_by(&random_unitary(a.rows(), &mut rng_from_seed(seed)))
}

/// Contractions that are partial isometries about half of the time.
fn random_pi_or_contraction(seed: u64) -> Matrix {
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(1..=4);
    match rng.random_range(0..3) {
        0 => {
            let r = rng.random_range(0..=n);
            let mut d = Matrix::zeros(n, n);
            for i in 0..r {
                d[(i, i)] = C64::new(1.0, 0.0);
            }
            let u = random_unitary(n, &mut rng);
            let v = random_unitary(n, &mut rng);
            u.matmul(&d).matmul(&v)
        }
        1 => {
            let blocks: Vec<usize> = (0..rng.random_range(1..=2)).map(|_| rng.random_range(1..=2)).collect();
            hidden_jordan_sum(&[], &blocks, seed)
        }
        _ => random_contraction(n, rng.random_range(0.2..=1.0), &mut rng),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructor_reproduces_spectrum(seed: u64, n in 1usize..=8, zeros in 0usize..=8) {
        let lams = random_spectrum(n, zeros.min(n), seed);
        let a = sn_from_eigenvalues(&lams, &tol()).unwrap();
        let report = is_sn(&a, &tol()).unwrap();
        prop_assert!(report.is_sn);
        prop_assert_eq!(report.zero_multiplicity, zeros.min(n));
        let got = eigenvalues(&a, &tol()).unwrap();
        prop_assert!(multiset_distance(&got, &lams).unwrap() <= 1e-7);
    }

    #[test]
    fn noninvertible_sn_index_structure(seed: u64, n in 1usize..=8, zeros in 1usize..=8) {
        let lams = random_spectrum(n, zeros.min(n), seed);
        let a = hidden(&sn_from_eigenvalues(&lams, &tol()).unwrap(), seed);
        let report = check_index_structure(&a, &tol()).unwrap();
        let s = report.index_structure.unwrap();
        prop_assert!(s.all_pass, "{s:?}");
        prop_assert_eq!(s.ascent, zeros.min(n));
        for (m, &r) in s.rank_sequence.iter().enumerate() {
            prop_assert_eq!(r, n - (m + 1));
        }
    }

    #[test]
    fn tensor_square_preserves_partial_isometry(seed: u64) {
        let a = random_pi_or_contraction(seed);
        let aa = a.kron(&a);
        prop_assert_eq!(is_partial_isometry(&a, &tol()).unwrap(), is_partial_isometry(&aa, &tol()).unwrap());
    }

    #[test]
    fn tensor_ascent_rule(seed: u64) {
        let a = random_pi_or_contraction(seed);
        let b = random_pi_or_contraction(!seed);
        let aa = ascent(&a, &tol()).unwrap();
        let ab = ascent(&b, &tol()).unwrap();
        let nil = |m: &Matrix, k: usize| rank_tol(&m.power(k), &tol()).unwrap() == 0;
        let expect = aa.min(ab)
            .max(if nil(&b, ab) { 0 } else { aa })
            .max(if nil(&a, aa) { 0 } else { ab });
        prop_assert_eq!(ascent(&a.kron(&b), &tol()).unwrap(), expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn construction_has_index_equal_to_ascent(n in 2usize..=8, j in 1usize..=7) {
        prop_assume!(j < n);
        let a = construct_pq(n, j, &tol()).unwrap();
        prop_assert_eq!(ppi_index(&a, &tol()).unwrap(), PpiIndex::Finite(j));
        prop_assert_eq!(ascent(&a, &tol()).unwrap(), j);
        for m in 1..=j {
            prop_assert_eq!(rank_tol(&a.power(m), &tol()).unwrap(), n - m);
        }
    }

    #[test]
    fn disc_conditions_agree(seed: u64, n in 1usize..=4, zeros in 0usize..=4, shift: bool) {
        let lams = if shift { vec![C64::new(0.0, 0.0); n] } else { random_spectrum(n, zeros.min(n), seed) };
        let a = hidden(&sn_from_eigenvalues(&lams, &tol()).unwrap(), seed);
        let r = sn_disc_equivalence(&a, &tol()).unwrap();
        prop_assert!(r.agree, "{r:?}");
        if shift {
            prop_assert!(r.similar_to_shift);
        }
    }

    #[test]
    fn ppi_direct_sums_are_not_sn(seed: u64) {
        let (profile, core) = profile_from_seed(seed, 3, 6);
        let a = random_ppi(&profile, core, seed).unwrap();
        let b = Matrix::direct_sum(&[&a, &Matrix::jordan(2)]);
        prop_assert!(!is_sn(&b, &tol()).unwrap().is_sn);
    }
}
