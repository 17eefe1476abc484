//! Random instances for property tests and benchmarks.

use rand::Rng;

use crate::checkmatrix::StabilizerPresentation;
use crate::clifford::{conjugate_presentation, GateOp};
use crate::matrix::ZdMatrix;
use crate::modring::Modulus;
use crate::pauli::PauliProduct;

pub fn random_pauli<R: Rng + ?Sized>(rng: &mut R, m: Modulus, n: usize) -> PauliProduct {
    let d = m.get();
    PauliProduct::new(
        m,
        rng.gen_range(0..d),
        (0..n).map(|_| rng.gen_range(0..d)).collect(),
        (0..n).map(|_| rng.gen_range(0..d)).collect(),
    )
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, m: Modulus, rows: usize, cols: usize) -> ZdMatrix {
    let d = m.get();
    let data: Vec<Vec<u64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..d)).collect())
        .collect();
    ZdMatrix::from_rows(m, cols, &data)
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, m: Modulus) -> u64 {
    loop {
        let q = rng.gen_range(1..m.get());
        if m.is_unit(q) {
            return q;
        }
    }
}

pub fn random_gate<R: Rng + ?Sized>(rng: &mut R, m: Modulus, n: usize) -> GateOp {
    let a = rng.gen_range(0..n);
    let kinds = if n >= 2 { 5 } else { 2 };
    let other = |rng: &mut R| {
        let b = rng.gen_range(0..n - 1);
        if b >= a {
            b + 1
        } else {
            b
        }
    };
    match rng.gen_range(0..kinds) {
        0 => GateOp::Fourier { a },
        1 => GateOp::Mult { q: random_unit(rng, m), a },
        2 => GateOp::Cnot {
            control: a,
            target: other(rng),
            power: rng.gen_range(1..m.get()),
        },
        3 => GateOp::Swap { a, b: other(rng) },
        _ => GateOp::Cphase { a, b: other(rng) },
    }
}

/// A random valid stabilizer presentation on `n` qudits.
///
/// Starts from commuting single-qudit generators (`Z^a`, `X^a`, or a pair
/// `X^a, Z^b` with `ab ≡ 0`), picks up eigenvalue phases from a random
/// Pauli conjugation, is scrambled by random Clifford gates and row
/// operations, and may gain a redundant generator.
pub fn random_valid_presentation<R: Rng + ?Sized>(rng: &mut R, m: Modulus, n: usize) -> StabilizerPresentation {
    let d = m.get();
    let divisors: Vec<u64> = (1..=d).filter(|e| d % e == 0).collect();
    let mut gens = Vec::new();
    for q in 0..n {
        match rng.gen_range(0..4) {
            0 => {}
            1 => gens.push(PauliProduct::z_on(m, n, q, rng.gen_range(1..d))),
            2 => gens.push(PauliProduct::x_on(m, n, q, rng.gen_range(1..d))),
            _ => {
                let e = divisors[rng.gen_range(0..divisors.len())];
                let a = e * rng.gen_range(0..d / e);
                let b = (d / e) * rng.gen_range(0..e);
                gens.push(PauliProduct::x_on(m, n, q, a));
                gens.push(PauliProduct::z_on(m, n, q, b));
            }
        }
    }
    if gens.is_empty() {
        gens.push(PauliProduct::z_on(m, n, rng.gen_range(0..n), rng.gen_range(0..d)));
    }

    let shift = random_pauli(rng, m, n);
    let gens: Vec<PauliProduct> = gens
        .into_iter()
        .map(|g| {
            let lambda = shift.commutation_phase(&g).expect("same shape");
            let phase = m.add(g.phase(), lambda);
            g.with_phase(phase)
        })
        .collect();
    let mut s = StabilizerPresentation::from_generators(&gens).expect("at most 2n generators");

    let gates: Vec<GateOp> = (0..rng.gen_range(3..=8)).map(|_| random_gate(rng, m, n)).collect();
    s = conjugate_presentation(&gates, &s).expect("gates are in range");

    let k = s.num_generators();
    for _ in 0..rng.gen_range(0..=5) {
        let i = rng.gen_range(0..k);
        match rng.gen_range(0..3) {
            0 if k >= 2 => {
                let j = (i + rng.gen_range(1..k)) % k;
                s = s.row_add(i, j, rng.gen_range(0..d as i64)).expect("indices in range");
            }
            1 if k >= 2 => {
                let j = rng.gen_range(0..k);
                s = s.row_swap(i, j).expect("indices in range");
            }
            _ => s = s.row_scale(i, random_unit(rng, m)).expect("unit scale"),
        }
    }

    if k < 2 * n && rng.gen_bool(0.3) {
        let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..d)).collect();
        let mut all = s.to_generators();
        all.push(s.combine(&coeffs));
        s = StabilizerPresentation::from_generators(&all).expect("at most 2n generators");
    }
    debug_assert!(s.is_valid(), "sampler produced an invalid presentation: {s}");
    s
}
