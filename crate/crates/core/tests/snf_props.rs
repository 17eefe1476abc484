mod common;

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_solutions, brute_span_size, md};
use quditstab::sample::random_matrix;
use quditstab::snf::{smith_normal_form, solve_linear, verify_snf};
use quditstab::ZdMatrix;

#[test]
fn dense_random_matrices_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for d in [2u64, 3, 4, 6, 8, 9, 12, 30, 36, 97, 360] {
        let m = md(d);
        for _ in 0..40 {
            let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=8));
            let a = random_matrix(&mut rng, m, rows, cols);
            let dec = smith_normal_form(&a);
            let verdict = verify_snf(&a, &dec);
            assert!(verdict.is_ok(), "D={d} {a}: {verdict}");
        }
    }
}

#[test]
fn prime_modulus_diagonal_is_ones_then_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for d in [2u64, 3, 5, 7, 11] {
        for _ in 0..30 {
            let (rows, cols) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let a = random_matrix(&mut rng, md(d), rows, cols);
            let diag = smith_normal_form(&a).diagonal();
            let rank = diag.iter().take_while(|&&v| v == 1).count();
            assert!(diag[rank..].iter().all(|&v| v == 0), "D={d} {diag:?}");
        }
    }
}

#[test]
fn span_order_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for d in [2u64, 4, 6, 8, 12] {
        let m = md(d);
        for _ in 0..30 {
            let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let a = random_matrix(&mut rng, m, rows, cols);
            let brute = brute_span_size(&a, 100_000).unwrap();
            assert_eq!(smith_normal_form(&a).row_span_order(), BigUint::from(brute), "D={d} {a}");
        }
    }
}

#[test]
fn zero_and_identity_inputs() {
    let m = md(12);
    let z = ZdMatrix::zeros(m, 3, 4);
    let dec = smith_normal_form(&z);
    assert!(verify_snf(&z, &dec).is_ok());
    assert_eq!(dec.rank(), 0);
    assert!(dec.ops.is_empty());
    let id = ZdMatrix::identity(m, 3);
    let dec = smith_normal_form(&id);
    assert_eq!(dec.diagonal(), vec![1, 1, 1]);
    assert!(dec.ops.is_empty());
}

fn affine_closure(d: u64, particular: &[u64], kernel: &[Vec<u64>]) -> HashSet<Vec<u64>> {
    let mut seen = HashSet::from([particular.to_vec()]);
    let mut stack = vec![particular.to_vec()];
    while let Some(v) = stack.pop() {
        for k in kernel {
            let next: Vec<u64> = v.iter().zip(k).map(|(a, b)| (a + b) % d).collect();
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    seen
}

#[test]
fn linear_solutions_are_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for d in [2u64, 3, 4, 6, 8, 12] {
        let m = md(d);
        for trial in 0..40 {
            let k = rng.gen_range(1..=3);
            let cols = rng.gen_range(1..=4);
            let a = random_matrix(&mut rng, m, k, cols);
            // Half the targets lie in the row span by construction.
            let b = if trial % 2 == 0 {
                let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..d)).collect();
                a.vec_mul(&coeffs)
            } else {
                (0..cols).map(|_| rng.gen_range(0..d)).collect()
            };
            let sol = solve_linear(&a, &b);
            let brute: HashSet<Vec<u64>> = brute_solutions(&a, &b).into_iter().collect();
            match sol.particular {
                None => assert!(brute.is_empty(), "D={d} {a} b={b:?}"),
                Some(p) => {
                    assert_eq!(a.vec_mul(&p), b);
                    for kv in &sol.kernel {
                        assert!(a.vec_mul(kv).iter().all(|&v| v == 0));
                    }
                    assert_eq!(affine_closure(d, &p, &sol.kernel), brute, "D={d} {a} b={b:?}");
                }
            }
        }
    }
}
