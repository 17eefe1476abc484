//! Stabilizer presentations: a k×2n parity-check matrix over Z_D plus a
//! phase vector. Row `i` with `phases[i]` stands for the generator
//! `ω^{phases[i]} X^{x_i} Z^{z_i}`, the X-block on the left.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ZdMatrix;
use crate::modring::{Modulus, Residue};
use crate::pauli::PauliProduct;
use crate::snf::{self, ElementaryOp};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RawPresentation", try_from = "RawPresentation")]
pub struct StabilizerPresentation {
    modulus: Modulus,
    n: usize,
    matrix: ZdMatrix,
    phases: Vec<Residue>,
}

/// Serialized shape of a presentation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawPresentation {
    #[serde(rename = "D")]
    pub d: u64,
    pub n: usize,
    pub phases: Vec<u64>,
    pub matrix: Vec<Vec<u64>>,
}

impl From<StabilizerPresentation> for RawPresentation {
    fn from(s: StabilizerPresentation) -> Self {
        RawPresentation {
            d: s.modulus.get(),
            n: s.n,
            phases: s.phases,
            matrix: s.matrix.to_rows(),
        }
    }
}

impl TryFrom<RawPresentation> for StabilizerPresentation {
    type Error = Error;

    fn try_from(raw: RawPresentation) -> Result<Self> {
        let modulus = Modulus::new(raw.d)?;
        if raw.matrix.iter().any(|r| r.len() != 2 * raw.n) || raw.matrix.len() != raw.phases.len() {
            return Err(Error::Syntax {
                position: 0,
                message: "matrix rows must have 2n entries, one per phase".into(),
            });
        }
        let matrix = ZdMatrix::from_rows(modulus, 2 * raw.n, &raw.matrix);
        StabilizerPresentation::new(modulus, raw.n, matrix, raw.phases)
    }
}

/// Diagnostics from [`StabilizerPresentation::validity`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    /// Every pair of generators commutes.
    pub commuting: bool,
    /// No nontrivial multiple of the identity lies in the group.
    pub phase_consistent: bool,
    /// First non-commuting pair (0-based generator indices).
    pub offending_pair: Option<(usize, usize)>,
    /// Exponent vector whose generator product is `ω^λ I` with `λ != 0`.
    /// An entry equal to D marks a single generator whose D-th power fails.
    pub offending_kernel_vector: Option<Vec<u64>>,
    /// The offending scalar phase `λ`.
    pub offending_phase: Option<Residue>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.commuting && self.phase_consistent
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let mut parts = Vec::new();
        if let Some((i, j)) = self.offending_pair {
            parts.push(format!("generators {} and {} do not commute", i + 1, j + 1));
        } else if !self.commuting {
            parts.push("generators do not commute".to_string());
        }
        if !self.phase_consistent {
            match (&self.offending_kernel_vector, self.offending_phase) {
                (Some(v), Some(ph)) => parts.push(format!(
                    "exponents {v:?} give w^{ph} I, a nontrivial multiple of the identity"
                )),
                _ => parts.push("group contains a nontrivial multiple of the identity".to_string()),
            }
        }
        write!(f, "{}", parts.join("; "))
    }
}

impl StabilizerPresentation {
    /// Builds a presentation from a k×2n matrix and k phases.
    pub fn new(modulus: Modulus, n: usize, matrix: ZdMatrix, phases: Vec<u64>) -> Result<Self> {
        let k = matrix.rows();
        if k == 0 {
            return Err(Error::EmptyPresentation);
        }
        if k > 2 * n {
            return Err(Error::TooManyGenerators { k, n });
        }
        if matrix.cols() != 2 * n || phases.len() != k || matrix.modulus() != modulus {
            return Err(Error::DimensionMismatch {
                left_d: modulus.get(),
                left_n: n,
                right_d: matrix.modulus().get(),
                right_n: matrix.cols() / 2,
            });
        }
        let phases = phases.into_iter().map(|p| modulus.reduce(p)).collect();
        Ok(StabilizerPresentation { modulus, n, matrix, phases })
    }

    pub fn from_generators(gens: &[PauliProduct]) -> Result<Self> {
        let first = gens.first().ok_or(Error::EmptyPresentation)?;
        for g in &gens[1..] {
            first.check_compatible(g)?;
        }
        let (modulus, n) = (first.modulus(), first.num_qudits());
        if gens.len() > 2 * n {
            return Err(Error::TooManyGenerators { k: gens.len(), n });
        }
        let rows: Vec<Vec<Residue>> = gens.iter().map(PauliProduct::symplectic).collect();
        let matrix = ZdMatrix::from_rows(modulus, 2 * n, &rows);
        let phases = gens.iter().map(PauliProduct::phase).collect();
        Self::new(modulus, n, matrix, phases)
    }

    pub fn to_generators(&self) -> Vec<PauliProduct> {
        (0..self.num_generators()).map(|i| self.generator(i)).collect()
    }

    pub fn generator(&self, i: usize) -> PauliProduct {
        let row = self.matrix.row(i);
        PauliProduct::new(
            self.modulus,
            self.phases[i],
            row[..self.n].to_vec(),
            row[self.n..].to_vec(),
        )
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn num_generators(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ZdMatrix {
        &self.matrix
    }

    pub fn phases(&self) -> &[Residue] {
        &self.phases
    }

    pub fn x_block(&self) -> ZdMatrix {
        self.matrix.submatrix(0, 0, self.num_generators(), self.n)
    }

    pub fn z_block(&self) -> ZdMatrix {
        self.matrix.submatrix(0, self.n, self.num_generators(), self.n)
    }

    fn set_generator(&mut self, i: usize, p: &PauliProduct) {
        self.matrix.row_mut(i).copy_from_slice(&p.symplectic());
        self.phases[i] = p.phase();
    }

    fn check_row(&self, i: usize) -> Result<()> {
        let k = self.num_generators();
        if i >= k {
            return Err(Error::IndexOutOfRange { index: i, limit: k });
        }
        Ok(())
    }

    /// Replaces generator `i` by `g_i · g_j^m` (`i != j`).
    pub fn row_add(&self, i: usize, j: usize, m: i64) -> Result<Self> {
        self.check_row(i)?;
        self.check_row(j)?;
        if i == j {
            return Err(Error::IndexOutOfRange { index: j, limit: i });
        }
        let e = self.modulus.reduce_signed(m);
        let mut out = self.clone();
        let updated = self.generator(i).mul_unchecked(&self.generator(j).power(e));
        out.set_generator(i, &updated);
        Ok(out)
    }

    pub fn row_swap(&self, i: usize, j: usize) -> Result<Self> {
        self.check_row(i)?;
        self.check_row(j)?;
        let mut out = self.clone();
        out.matrix.swap_rows(i, j);
        out.phases.swap(i, j);
        Ok(out)
    }

    /// Replaces generator `i` by `g_i^q` for a unit `q`.
    pub fn row_scale(&self, i: usize, q: Residue) -> Result<Self> {
        self.check_row(i)?;
        let q = self.modulus.reduce(q);
        if !self.modulus.is_unit(q) {
            return Err(Error::NotAUnit {
                value: q,
                modulus: self.modulus.get(),
            });
        }
        let mut out = self.clone();
        out.set_generator(i, &self.generator(i).power(q));
        Ok(out)
    }

    /// Applies a row operation through the group law. Column operations are
    /// rejected: they change the group and belong to Clifford conjugation.
    pub fn apply_row_op(&self, op: &ElementaryOp) -> Result<Self> {
        match *op {
            ElementaryOp::SwapRows { a, b } => self.row_swap(a, b),
            ElementaryOp::ScaleRow { index, factor } => self.row_scale(index, factor),
            ElementaryOp::AddRows { target, source, mult } => self.row_add(target, source, mult as i64),
            _ => Err(Error::UnrealizableOp(format!("'{op}' is not a row operation"))),
        }
    }

    /// `Π g_i^{c_i}` in index order.
    pub fn combine(&self, coeffs: &[u64]) -> PauliProduct {
        coeffs
            .iter()
            .enumerate()
            .fold(PauliProduct::identity(self.modulus, self.n), |acc, (i, &c)| {
                acc.mul_unchecked(&self.generator(i).power(c))
            })
    }

    /// Checks commutation of all generator pairs and the absence of any
    /// `ω^λ I` (`λ != 0`) among the group elements.
    pub fn validity(&self) -> ValidityReport {
        let k = self.num_generators();
        let gens = self.to_generators();
        let mut report = ValidityReport {
            commuting: true,
            phase_consistent: true,
            ..Default::default()
        };
        'outer: for i in 0..k {
            for j in i + 1..k {
                if gens[i].commutation_phase(&gens[j]).expect("shared dimensions") != 0 {
                    report.commuting = false;
                    report.offending_pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        // Exponent vectors with a·S ≡ 0 are generated (over Z) by the kernel
        // basis together with D·e_i; the scalar phase is additive on them
        // once the generators commute.
        let d = self.modulus.get();
        let sol = snf::solve_linear(&self.matrix, &vec![0; 2 * self.n]);
        let mut candidates = sol.kernel;
        candidates.extend((0..k).map(|i| {
            let mut v = vec![0; k];
            v[i] = d;
            v
        }));
        for a in candidates {
            let p = self.combine(&a);
            debug_assert!(p.is_scalar());
            if p.phase() != 0 {
                report.phase_consistent = false;
                report.offending_phase = Some(p.phase());
                report.offending_kernel_vector = Some(a);
                break;
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validity().is_valid()
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = self.validity();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidStabilizer(report))
        }
    }

    /// Number of elements of the generated group, `Π D / d_i` over the Smith
    /// diagonal of the parity-check matrix.
    pub fn group_order(&self) -> Result<BigUint> {
        self.require_valid()?;
        Ok(snf::smith_normal_form(&self.matrix).row_span_order())
    }

    /// Dimension of the stabilized code, `D^n / |S|`.
    pub fn code_dimension(&self) -> Result<BigUint> {
        let order = self.group_order()?;
        let total = BigUint::from(self.modulus.get()).pow(self.n as u32);
        debug_assert!((&total % &order) == BigUint::from(0u32));
        Ok(total / order)
    }

    /// Group membership, phase included.
    pub fn contains(&self, p: &PauliProduct) -> Result<bool> {
        self.generator(0).check_compatible(p)?;
        self.require_valid()?;
        let sol = snf::solve_linear(&self.matrix, &p.symplectic());
        Ok(match sol.particular {
            Some(a) => self.combine(&a).phase() == p.phase(),
            None => false,
        })
    }

    /// True when both presentations generate the same group.
    pub fn group_equal(&self, other: &StabilizerPresentation) -> Result<bool> {
        if self.modulus != other.modulus || self.n != other.n {
            return Err(Error::DimensionMismatch {
                left_d: self.modulus.get(),
                left_n: self.n,
                right_d: other.modulus.get(),
                right_n: other.n,
            });
        }
        if self.group_order()? != other.group_order()? {
            return Ok(false);
        }
        for g in self.to_generators() {
            if !other.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for StabilizerPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.to_generators().iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    fn pres(d: u64, n: usize, gens: &[&str]) -> StabilizerPresentation {
        let m = md(d);
        let gens: Vec<PauliProduct> = gens.iter().map(|g| PauliProduct::parse(g, m, n).unwrap()).collect();
        StabilizerPresentation::from_generators(&gens).unwrap()
    }

    fn eq15() -> StabilizerPresentation {
        pres(4, 2, &["w^2 X1^3 Z2^2", "X2^2"])
    }

    #[test]
    fn generators_round_trip() {
        let s = eq15();
        assert_eq!(s.phases(), &[2, 0]);
        assert_eq!(s.matrix().to_rows(), vec![vec![3, 0, 0, 2], vec![0, 2, 0, 0]]);
        let back = StabilizerPresentation::from_generators(&s.to_generators()).unwrap();
        assert_eq!(back, s);

        let id = pres(3, 2, &["I"]);
        assert_eq!(id.matrix().to_rows(), vec![vec![0; 4]]);
        assert_eq!(id.phases(), &[0]);
    }

    #[test]
    fn too_many_generators() {
        let m = md(3);
        let gens = vec![PauliProduct::identity(m, 2); 5];
        assert_eq!(
            StabilizerPresentation::from_generators(&gens),
            Err(Error::TooManyGenerators { k: 5, n: 2 })
        );
        assert_eq!(StabilizerPresentation::from_generators(&[]), Err(Error::EmptyPresentation));
    }

    #[test]
    fn row_add_examples() {
        let s = eq15();
        assert_eq!(s.row_add(0, 1, 0).unwrap(), s);
        let t = s.row_add(0, 1, 1).unwrap();
        assert_eq!(t.matrix().row(0), &[3, 2, 0, 2]);
        // (w^2 X1^3 Z2^2)(X2^2) picks up -z·x = -(2·2) = 0 mod 4.
        assert_eq!(t.phases()[0], 2);
        let back = t.row_add(0, 1, -1).unwrap();
        assert_eq!(back.matrix(), s.matrix());
        assert!(s.row_add(0, 0, 1).is_err());
        assert!(matches!(s.row_add(0, 5, 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn row_swap_and_scale() {
        let s = eq15();
        assert_eq!(s.row_swap(0, 1).unwrap().row_swap(0, 1).unwrap(), s);
        assert_eq!(s.row_scale(0, 1).unwrap(), s);
        assert!(matches!(s.row_scale(0, 2), Err(Error::NotAUnit { .. })));

        let p = pres(5, 2, &["w X1^2 Z2^3", "Z1 Z2"]);
        let q = p.row_scale(0, 2).unwrap().row_scale(0, 3).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn group_order_examples() {
        let z2 = pres(4, 1, &["Z1^2"]);
        assert_eq!(z2.group_order().unwrap(), BigUint::from(2u32));
        assert_eq!(z2.code_dimension().unwrap(), BigUint::from(2u32));

        let xz = pres(4, 1, &["X1^2", "Z1^2"]);
        assert_eq!(xz.group_order().unwrap(), BigUint::from(4u32));
        assert_eq!(xz.code_dimension().unwrap(), BigUint::from(1u32));

        let id = pres(6, 3, &["I"]);
        assert_eq!(id.group_order().unwrap(), BigUint::from(1u32));
        assert_eq!(id.code_dimension().unwrap(), BigUint::from(216u32));
    }

    #[test]
    fn validity_examples() {
        let bad = pres(3, 1, &["X1", "Z1"]);
        let r = bad.validity();
        assert!(!r.commuting);
        assert_eq!(r.offending_pair, Some((0, 1)));
        assert!(matches!(bad.group_order(), Err(Error::InvalidStabilizer(_))));

        let scalar = pres(3, 1, &["w"]);
        let r = scalar.validity();
        assert!(r.commuting);
        assert!(!r.phase_consistent);

        assert!(eq15().is_valid());
    }

    #[test]
    fn validity_catches_hidden_scalars() {
        // X1^2 and w X1^2 together contain w I.
        let s = pres(4, 1, &["X1^2", "w X1^2"]);
        assert!(!s.validity().phase_consistent);
        // XZ has order 4 in D = 2: (XZ)^2 = -I.
        let t = pres(2, 1, &["X1 Z1"]);
        let r = t.validity();
        assert!(!r.phase_consistent);
        assert_eq!(r.offending_kernel_vector, Some(vec![2]));
        // (w^2 X^2)^2 = w^4 X^4 = I in D = 4: valid.
        assert!(pres(4, 1, &["w^2 X1^2"]).is_valid());
    }

    #[test]
    fn membership() {
        let z2 = pres(4, 1, &["Z1^2"]);
        let m = md(4);
        assert!(z2.contains(&PauliProduct::identity(m, 1)).unwrap());
        assert!(z2.contains(&PauliProduct::z_on(m, 1, 0, 2)).unwrap());
        assert!(!z2.contains(&PauliProduct::z_on(m, 1, 0, 1)).unwrap());
        assert!(!z2.contains(&PauliProduct::z_on(m, 1, 0, 2).with_phase(2)).unwrap());

        let s = eq15();
        let prod = s.generator(0).multiply(&s.generator(1)).unwrap();
        assert!(s.contains(&prod).unwrap());
    }

    #[test]
    fn group_equality() {
        let z2 = pres(4, 1, &["Z1^2"]);
        assert!(z2.group_equal(&z2).unwrap());
        let redundant = pres(4, 1, &["Z1^2", "Z1^6"]);
        assert!(z2.group_equal(&redundant).unwrap());
        let z = pres(4, 1, &["Z1"]);
        assert!(!z2.group_equal(&z).unwrap());
        let other = pres(4, 2, &["Z1^2"]);
        assert!(matches!(z2.group_equal(&other), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn serde_round_trip() {
        let s = eq15();
        let json = serde_json::to_string(&s).unwrap();
        let back: StabilizerPresentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
