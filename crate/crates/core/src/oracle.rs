//! Dense complex-matrix ground truth for small instances.
//!
//! Basis states `|j_1 … j_n⟩` are indexed with qudit 1 as the most
//! significant digit. `X|j⟩ = |j-1⟩` and `Z|j⟩ = ω^j |j⟩`, read off from
//! `X = Σ|j⟩⟨j+1|` and `Z = Σ ω^j |j⟩⟨j|`.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::checkmatrix::StabilizerPresentation;
use crate::clifford::GateOp;
use crate::error::{Error, Result};
use crate::modring::Modulus;
use crate::pauli::PauliProduct;

pub const DEFAULT_BOUND: usize = 256;
pub const MAX_BOUND: usize = 1024;
pub const BOUND_ENV: &str = "QUDITSTAB_ORACLE_BOUND";
/// Absolute tolerance for dense comparisons.
pub const TOLERANCE: f64 = 1e-9;
pub const GROUP_LIMIT: usize = 10_000;

/// The dense bound from `QUDITSTAB_ORACLE_BOUND`, clamped to [`MAX_BOUND`].
pub fn bound_from_env() -> usize {
    std::env::var(BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|b| b.min(MAX_BOUND))
        .unwrap_or(DEFAULT_BOUND)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn pow(&self, e: u64) -> DenseOperator {
        (0..e).fold(DenseOperator::identity(self.dim()), |acc, _| acc.mul(self))
    }

    /// `self · p · self†`
    pub fn conjugate(&self, p: &DenseOperator) -> DenseOperator {
        self.mul(p).mul(&self.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn distance(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DenseOperator) -> bool {
        self.dim() == other.dim() && self.distance(other) < TOLERANCE
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.adjoint()).distance(&DenseOperator::identity(self.dim())) < tol
    }

    /// Frobenius norm of `AB - BA`.
    pub fn commutator_norm(&self, other: &DenseOperator) -> f64 {
        (&self.matrix * &other.matrix - &other.matrix * &self.matrix).norm()
    }
}

/// `D^n`, or `OracleTooLarge` if it exceeds `bound`.
pub fn dense_dim(m: Modulus, n: usize, bound: usize) -> Result<usize> {
    let d = m.get() as usize;
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(d);
        if dim > bound {
            return Err(Error::OracleTooLarge { dim, bound });
        }
    }
    Ok(dim)
}

pub fn omega_power(m: Modulus, e: u64) -> Complex64 {
    let d = m.get();
    Complex64::from_polar(1.0, 2.0 * PI * ((e % d) as f64) / d as f64)
}

fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &j| acc * d + j)
}

/// Dense matrix of `ω^λ X^x Z^z`.
pub fn pauli_to_dense(p: &PauliProduct, bound: usize) -> Result<DenseOperator> {
    let m = p.modulus();
    let d = m.get() as usize;
    let n = p.num_qudits();
    let dim = dense_dim(m, n, bound)?;
    let mut mat = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let ks = digits(col, d, n);
        let mut e = p.phase();
        let mut out = vec![0; n];
        for q in 0..n {
            e += p.z()[q] * ks[q] as u64;
            out[q] = (ks[q] + d - p.x()[q] as usize) % d;
        }
        mat[(index_of(&out, d), col)] = omega_power(m, e);
    }
    Ok(DenseOperator { matrix: mat })
}

/// Lifts an operator on the listed qudits (local order, first = most
/// significant) to the full register.
fn embed(local: &DMatrix<Complex64>, qudits: &[usize], d: usize, n: usize) -> DMatrix<Complex64> {
    let dim = d.pow(n as u32);
    let ldim = local.nrows();
    let mut mat = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let ks = digits(col, d, n);
        let lin = index_of(&qudits.iter().map(|&q| ks[q]).collect::<Vec<_>>(), d);
        for lout in 0..ldim {
            let amp = local[(lout, lin)];
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut out = ks.clone();
            for (slot, &q) in digits(lout, d, qudits.len()).iter().zip(qudits) {
                out[q] = *slot;
            }
            mat[(index_of(&out, d), col)] += amp;
        }
    }
    mat
}

fn local_gate(g: &GateOp, m: Modulus) -> DMatrix<Complex64> {
    let d = m.get() as usize;
    let one = Complex64::new(1.0, 0.0);
    match *g {
        GateOp::Fourier { .. } => {
            let norm = 1.0 / (d as f64).sqrt();
            DMatrix::from_fn(d, d, |j, k| omega_power(m, (j * k) as u64) * norm)
        }
        GateOp::Mult { q, .. } => {
            // S_q = Σ |j⟩⟨jq|
            let mut s = DMatrix::zeros(d, d);
            for j in 0..d {
                s[(j, (j * q as usize) % d)] = one;
            }
            s
        }
        GateOp::Cnot { power, .. } => {
            // |j⟩⟨j| ⊗ X^{j·power}, X^s|k⟩ = |k - s⟩
            let mut c = DMatrix::zeros(d * d, d * d);
            for j in 0..d {
                for k in 0..d {
                    let shift = (j * power as usize) % d;
                    c[(j * d + (k + d - shift) % d, j * d + k)] = one;
                }
            }
            c
        }
        GateOp::Swap { .. } => {
            let mut s = DMatrix::zeros(d * d, d * d);
            for j in 0..d {
                for k in 0..d {
                    s[(k * d + j, j * d + k)] = one;
                }
            }
            s
        }
        GateOp::Cphase { .. } => {
            DMatrix::from_fn(d * d, d * d, |r, c| {
                if r == c {
                    omega_power(m, ((r / d) * (r % d)) as u64)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
    }
}

/// Dense unitary of a catalog gate built from its literal definition.
pub fn gate_unitary(g: &GateOp, m: Modulus, n: usize, bound: usize) -> Result<DenseOperator> {
    dense_dim(m, n, bound)?;
    let d = m.get() as usize;
    Ok(DenseOperator {
        matrix: embed(&local_gate(g, m), &g.qudits(), d, n),
    })
}

/// Breadth-first closure of the generators under multiplication.
pub fn enumerate_group(s: &StabilizerPresentation, limit: usize) -> Result<Vec<PauliProduct>> {
    let gens = s.to_generators();
    let id = PauliProduct::identity(s.modulus(), s.num_qudits());
    let mut seen: HashSet<PauliProduct> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let next = e.mul_unchecked(g);
            if seen.insert(next.clone()) {
                if seen.len() > limit {
                    return Err(Error::GroupTooLarge { limit });
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// `P = (1/|S|) Σ_{s ∈ S} s` over the enumerated group.
pub fn projector(s: &StabilizerPresentation, bound: usize) -> Result<DenseOperator> {
    let dim = dense_dim(s.modulus(), s.num_qudits(), bound)?;
    let report = s.validity();
    if !report.is_valid() {
        return Err(Error::InvalidStabilizer(report));
    }
    let elements = enumerate_group(s, GROUP_LIMIT)?;
    let mut sum = DMatrix::zeros(dim, dim);
    for e in &elements {
        sum += pauli_to_dense(e, bound)?.matrix;
    }
    Ok(DenseOperator {
        matrix: sum / Complex64::new(elements.len() as f64, 0.0),
    })
}

/// One checked identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.residual < TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IdentityReport {
    pub modulus: u64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }
}

impl std::fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "D={} {verdict} {} (residual {:.2e})", self.modulus, c.name, c.residual)?;
        }
        Ok(())
    }
}

/// Checks the two-qudit gate identities and every single-generator
/// conjugation rule of the catalog densely, on qudits a = 1, b = 2.
///
/// Expected conjugation images are written out literally here rather than
/// taken from [`crate::clifford::conjugate_pauli`].
pub fn assert_identities(m: Modulus) -> IdentityReport {
    let d = m.get();
    let bound = usize::MAX;
    let n = 2;
    let gate = |g: GateOp| gate_unitary(&g, m, n, bound).expect("two-qudit gate fits");
    let pauli = |phase: u64, x: [u64; 2], z: [u64; 2]| {
        pauli_to_dense(&PauliProduct::new(m, phase, x.to_vec(), z.to_vec()), bound).expect("fits")
    };
    let neg = |e: u64| (d - e % d) % d;
    let mut report = IdentityReport {
        modulus: d,
        checks: Vec::new(),
    };
    let mut check = |name: &str, lhs: &DenseOperator, rhs: &DenseOperator| {
        report.checks.push(IdentityCheck {
            name: name.to_string(),
            residual: lhs.distance(rhs),
        });
    };

    let (a, b) = (0, 1);
    let f_a = gate(GateOp::Fourier { a });
    let f_b = gate(GateOp::Fourier { a: b });
    let cnot_ab = gate(GateOp::Cnot { control: a, target: b, power: 1 });
    let cnot_ba = gate(GateOp::Cnot { control: b, target: a, power: 1 });
    let swap = gate(GateOp::Swap { a, b });
    let cp = gate(GateOp::Cphase { a, b });

    let rhs = cnot_ab.mul(&cnot_ba.adjoint()).mul(&cnot_ab).mul(&f_a.mul(&f_a));
    check("SWAP_ab = CNOT_ab CNOT_ba^dag CNOT_ab (F_a^2 x I_b)", &swap, &rhs);
    check("CNOT_ba^dag = CNOT_ba^(D-1)", &cnot_ba.adjoint(), &cnot_ba.pow(d - 1));
    let fb2 = f_b.mul(&f_b);
    check(
        "CNOT_ba^dag = (I_a x F_b^2) CNOT_ba (I_a x F_b^2)",
        &cnot_ba.adjoint(),
        &fb2.mul(&cnot_ba).mul(&fb2),
    );
    check("CNOT_ab = (I_a x F_b) CP_ab (I_a x F_b)^dag", &cnot_ab, &f_b.conjugate(&cp));
    for power in 2..=d {
        check(
            &format!("CNOT(power={power}) = CNOT^{power}"),
            &gate(GateOp::Cnot { control: a, target: b, power }),
            &cnot_ab.pow(power),
        );
    }
    for (name, g) in [("F", &f_a), ("CNOT", &cnot_ab), ("SWAP", &swap), ("CP", &cp)] {
        check(&format!("{name} is unitary"), &g.mul(&g.adjoint()), &DenseOperator::identity(g.dim()));
    }

    // Single-qudit images on qudit a.
    let xa = pauli(0, [1, 0], [0, 0]);
    let za = pauli(0, [0, 0], [1, 0]);
    let xb = pauli(0, [0, 1], [0, 0]);
    let zb = pauli(0, [0, 0], [0, 1]);
    check("F Z F^dag = X", &f_a.conjugate(&za), &xa);
    check("F X F^dag = Z^(D-1)", &f_a.conjugate(&xa), &pauli(0, [0, 0], [d - 1, 0]));
    for q in (1..d).filter(|&q| m.is_unit(q)) {
        let s = gate(GateOp::Mult { q, a });
        let qbar = m.inverse(q).expect("unit");
        check(&format!("S_{q} Z S_{q}^dag = Z^{q}"), &s.conjugate(&za), &pauli(0, [0, 0], [q, 0]));
        check(
            &format!("S_{q} X S_{q}^dag = X^{qbar}"),
            &s.conjugate(&xa),
            &pauli(0, [qbar, 0], [0, 0]),
        );
    }

    // Two-qudit images.
    let rows: [(&str, &DenseOperator, [DenseOperator; 3]); 4] = [
        ("I_a x Z_b", &zb, [pauli(0, [0, 0], [1, 1]), za.clone(), zb.clone()]),
        ("Z_a x I_b", &za, [za.clone(), zb.clone(), za.clone()]),
        ("I_a x X_b", &xb, [xb.clone(), xa.clone(), pauli(0, [0, 1], [neg(1), 0])]),
        (
            "X_a x I_b",
            &xa,
            [pauli(0, [1, neg(1)], [0, 0]), xb.clone(), pauli(0, [1, 0], [0, neg(1)])],
        ),
    ];
    for (label, input, [by_cnot, by_swap, by_cp]) in &rows {
        check(&format!("CNOT_ab on {label}"), &cnot_ab.conjugate(input), by_cnot);
        check(&format!("SWAP_ab on {label}"), &swap.conjugate(input), by_swap);
        check(&format!("CP_ab on {label}"), &cp.conjugate(input), by_cp);
    }
    report
}
