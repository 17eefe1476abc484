mod common;

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{md, small_cases};
use quditstab::clifford::conjugate_presentation;
use quditstab::oracle::{enumerate_group, GROUP_LIMIT};
use quditstab::sample::{random_gate, random_pauli, random_valid_presentation};
use quditstab::standard_form::{standardize, transcript, transcript_result, StandardFormRecord};
use quditstab::textfmt::{format_stabilizer_file, parse_stabilizer_file};

const DS: [u64; 7] = [2, 3, 4, 6, 8, 9, 12];

#[test]
fn row_operations_preserve_the_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (d, n) in small_cases(&DS) {
        let m = md(d);
        for _ in 0..6 {
            let s = random_valid_presentation(&mut rng, m, n);
            let k = s.num_generators();
            let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
            let mut variants = vec![s.row_swap(i, j).unwrap(), s.row_scale(i, 1).unwrap()];
            if i != j {
                variants.push(s.row_add(i, j, rng.gen_range(-(d as i64)..d as i64)).unwrap());
            }
            if let Some(q) = (1..d).rev().find(|&q| m.is_unit(q)) {
                variants.push(s.row_scale(i, q).unwrap());
            }
            for t in variants {
                assert!(t.group_equal(&s).unwrap(), "{s} vs {t}");
                assert_eq!(t.group_order().unwrap(), s.group_order().unwrap());
            }
        }
    }
}

#[test]
fn membership_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for (d, n) in small_cases(&DS) {
        let m = md(d);
        for _ in 0..4 {
            let s = random_valid_presentation(&mut rng, m, n);
            let elements = enumerate_group(&s, GROUP_LIMIT).unwrap();
            assert_eq!(BigUint::from(elements.len()), s.group_order().unwrap());
            for e in elements.iter().take(50) {
                assert!(s.contains(e).unwrap(), "{e} in {s}");
            }
            let set: HashSet<_> = elements.into_iter().collect();
            for _ in 0..30 {
                let p = random_pauli(&mut rng, m, n);
                assert_eq!(s.contains(&p).unwrap(), set.contains(&p), "{p} in {s}");
            }
        }
    }
}

#[test]
fn clifford_conjugation_preserves_order_and_validity() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for (d, n) in small_cases(&DS) {
        let m = md(d);
        for _ in 0..6 {
            let s = random_valid_presentation(&mut rng, m, n);
            let gates: Vec<_> = (0..5).map(|_| random_gate(&mut rng, m, n)).collect();
            let t = conjugate_presentation(&gates, &s).unwrap();
            assert!(t.is_valid());
            assert_eq!(t.group_order().unwrap(), s.group_order().unwrap());
        }
    }
}

#[test]
fn standard_form_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for (d, n) in small_cases(&DS) {
        let m = md(d);
        for _ in 0..5 {
            let s = random_valid_presentation(&mut rng, m, n);
            let sf = standardize(&s).unwrap();
            assert!(conjugate_presentation(&sf.gates, &s).unwrap().group_equal(&sf.result).unwrap());

            let text = transcript(&sf);
            let result = parse_stabilizer_file(transcript_result(&text).unwrap()).unwrap();
            assert_eq!(result, sf.result);

            let record: StandardFormRecord = serde_json::from_str(&sf.to_json()).unwrap();
            assert_eq!(record.replay().unwrap(), sf.result);

            // A standard form is a fixed point up to the identity gates.
            let again = standardize(&sf.result).unwrap();
            assert_eq!(again.r, sf.r);
            assert_eq!(again.m, sf.m);
        }
    }
}

#[test]
fn stabilizer_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for (d, n) in small_cases(&DS) {
        for _ in 0..5 {
            let s = random_valid_presentation(&mut rng, md(d), n);
            assert_eq!(parse_stabilizer_file(&format_stabilizer_file(&s)).unwrap(), s);
        }
    }
}
