#![allow(dead_code)]

use std::collections::HashSet;

use quditstab::{Modulus, ZdMatrix};

/// `(D, n)` pairs with `n <= 3` and `D^n <= 256`.
pub fn small_cases(ds: &[u64]) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for &d in ds {
        for n in 1..=3usize {
            if d.pow(n as u32) <= 256 {
                out.push((d, n));
            }
        }
    }
    out
}

pub fn md(d: u64) -> Modulus {
    Modulus::new(d).unwrap()
}

/// Size of the Z_D row span of `a` by breadth-first closure, or `None` once
/// it exceeds `cap`.
pub fn brute_span_size(a: &ZdMatrix, cap: usize) -> Option<usize> {
    let m = a.modulus();
    let zero = vec![0u64; a.cols()];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for i in 0..a.rows() {
            let next: Vec<u64> = v.iter().zip(a.row(i)).map(|(&x, &y)| m.add(x, y)).collect();
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return None;
                }
                frontier.push(next);
            }
        }
    }
    Some(seen.len())
}

/// Every vector `a` in Z_D^k with `a·A = b`, by exhaustive search.
pub fn brute_solutions(a: &ZdMatrix, b: &[u64]) -> Vec<Vec<u64>> {
    let m = a.modulus();
    let d = m.get();
    let k = a.rows();
    let total = d.pow(k as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0; k];
            for slot in v.iter_mut() {
                *slot = idx % d;
                idx /= d;
            }
            v
        })
        .filter(|v| a.vec_mul(v) == b)
        .collect()
}

pub fn print_line(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[{verdict}] criterion {id}: {name} -- {detail}");
}
