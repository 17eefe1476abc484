//! The Clifford gate catalog `F`, `S_q`, `CNOT^m`, `SWAP`, `CP` and its
//! action on Pauli products by conjugation `p ↦ g p g†`.
//!
//! Each gate is described by the images of `X` and `Z` on the qudits it
//! touches:
//!
//! | gate          | X_a            | Z_a     | X_b          | Z_b         |
//! |---------------|----------------|---------|--------------|-------------|
//! | F_a           | Z_a^{-1}       | X_a     |              |             |
//! | S_{q,a}       | X_a^{q̄}        | Z_a^q   |              |             |
//! | CNOT_ab^m     | X_a X_b^{-m}   | Z_a     | X_b          | Z_a^m Z_b   |
//! | SWAP_ab       | X_b            | Z_b     | X_a          | Z_a         |
//! | CP_ab         | X_a Z_b^{-1}   | Z_a     | Z_a^{-1} X_b | Z_b         |
//!
//! The image of a general product is assembled with the Pauli group law, so
//! reordering phases come out exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::checkmatrix::StabilizerPresentation;
use crate::error::{Error, Result};
use crate::modring::{Modulus, Residue};
use crate::oracle::{self, DenseOperator};
use crate::pauli::PauliProduct;
use crate::snf::ElementaryOp;

/// A catalog gate. Qudit indices are 0-based in memory and printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GateOp {
    Fourier { a: usize },
    /// Multiplicative gate `S_q |j⟩ = |j q̄⟩`; `q` must be a unit.
    Mult { q: Residue, a: usize },
    /// `CNOT^power` with control `control` and target `target`.
    Cnot { control: usize, target: usize, power: u64 },
    Swap { a: usize, b: usize },
    Cphase { a: usize, b: usize },
}

impl GateOp {
    /// The qudits the gate acts on, in the local order used by its images.
    pub fn qudits(&self) -> Vec<usize> {
        match *self {
            GateOp::Fourier { a } | GateOp::Mult { a, .. } => vec![a],
            GateOp::Cnot { control, target, .. } => vec![control, target],
            GateOp::Swap { a, b } | GateOp::Cphase { a, b } => vec![a, b],
        }
    }

    pub fn validate(&self, modulus: Modulus, n: usize) -> Result<()> {
        let qs = self.qudits();
        for &q in &qs {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q + 1, limit: n });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidGate(format!("{self} acts twice on qudit {}", qs[0] + 1)));
        }
        match *self {
            GateOp::Mult { q, .. } if !modulus.is_unit(q) => Err(Error::NotAUnit {
                value: q,
                modulus: modulus.get(),
            }),
            GateOp::Cnot { power: 0, .. } => Err(Error::InvalidGate("CNOT power must be at least 1".into())),
            _ => Ok(()),
        }
    }

    /// Images of `X_i` and `Z_i` for each local qudit, as Pauli products on
    /// the local register.
    fn local_images(&self, m: Modulus) -> Result<(Vec<PauliProduct>, Vec<PauliProduct>)> {
        let x = |len: usize, q: usize, e: u64| PauliProduct::x_on(m, len, q, e);
        let z = |len: usize, q: usize, e: u64| PauliProduct::z_on(m, len, q, e);
        let neg = |e: u64| m.neg(m.reduce(e));
        Ok(match *self {
            GateOp::Fourier { .. } => (vec![z(1, 0, neg(1))], vec![x(1, 0, 1)]),
            GateOp::Mult { q, .. } => (vec![x(1, 0, m.inverse(q)?)], vec![z(1, 0, q)]),
            GateOp::Cnot { power, .. } => (
                vec![x(2, 0, 1).mul_unchecked(&x(2, 1, neg(power))), x(2, 1, 1)],
                vec![z(2, 0, 1), z(2, 0, power).mul_unchecked(&z(2, 1, 1))],
            ),
            GateOp::Swap { .. } => (vec![x(2, 1, 1), x(2, 0, 1)], vec![z(2, 1, 1), z(2, 0, 1)]),
            GateOp::Cphase { .. } => (
                vec![x(2, 0, 1).mul_unchecked(&z(2, 1, neg(1))), z(2, 0, neg(1)).mul_unchecked(&x(2, 1, 1))],
                vec![z(2, 0, 1), z(2, 1, 1)],
            ),
        })
    }
}

/// `g p g†` in canonical form.
pub fn conjugate_pauli(g: &GateOp, p: &PauliProduct) -> Result<PauliProduct> {
    let m = p.modulus();
    let n = p.num_qudits();
    g.validate(m, n)?;
    let qs = g.qudits();
    let (ximg, zimg) = g.local_images(m)?;
    // p = ω^λ (local part) ⊗ (rest); only the local part changes.
    let mut local = PauliProduct::identity(m, qs.len());
    for (i, &q) in qs.iter().enumerate() {
        local = local
            .mul_unchecked(&ximg[i].power(p.x()[q]))
            .mul_unchecked(&zimg[i].power(p.z()[q]));
    }
    let mut x = p.x().to_vec();
    let mut z = p.z().to_vec();
    for (i, &q) in qs.iter().enumerate() {
        x[q] = local.x()[i];
        z[q] = local.z()[i];
    }
    Ok(PauliProduct::new(m, m.add(p.phase(), local.phase()), x, z))
}

/// Conjugates every generator by `gates[0]`, then `gates[1]`, and so on.
pub fn conjugate_presentation(gates: &[GateOp], s: &StabilizerPresentation) -> Result<StabilizerPresentation> {
    let gens = s
        .to_generators()
        .into_iter()
        .map(|mut p| {
            for g in gates {
                p = conjugate_pauli(g, &p)?;
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    StabilizerPresentation::from_generators(&gens)
}

/// The Z-block (or X-block) counterpart that a catalog gate applies together
/// with the given column operation on a 2n-column parity-check matrix.
pub fn partner_op(op: &ElementaryOp, n: usize, m: Modulus) -> Result<ElementaryOp> {
    let side = |c: usize| -> Result<(bool, usize)> {
        if c >= 2 * n {
            Err(Error::IndexOutOfRange { index: c, limit: 2 * n })
        } else {
            Ok((c < n, c % n))
        }
    };
    let flip = |is_x: bool, q: usize| if is_x { q + n } else { q };
    match *op {
        ElementaryOp::SwapCols { a, b } => {
            let ((xa, qa), (xb, qb)) = (side(a)?, side(b)?);
            if xa != xb {
                return Err(Error::UnrealizableOp(format!("'{op}' mixes X and Z columns")));
            }
            Ok(ElementaryOp::SwapCols { a: flip(xa, qa), b: flip(xb, qb) })
        }
        ElementaryOp::ScaleCol { index, factor } => {
            let (is_x, q) = side(index)?;
            Ok(ElementaryOp::ScaleCol { index: flip(is_x, q), factor: m.inverse(factor)? })
        }
        ElementaryOp::AddCols { target, source, mult } => {
            let ((xt, qt), (xs, qs)) = (side(target)?, side(source)?);
            if xt != xs {
                return Err(Error::UnrealizableOp(format!("'{op}' mixes X and Z columns")));
            }
            // X: col b += c col a  <->  Z: col a+n += -c col b+n
            Ok(ElementaryOp::AddCols {
                target: flip(xs, qs),
                source: flip(xt, qt),
                mult: m.neg(mult),
            })
        }
        _ => Err(Error::UnrealizableOp(format!("'{op}' is a row operation"))),
    }
}

/// Maps a paired column operation (an op on one block together with its
/// partner on the other block) to the gate whose conjugation performs it.
pub fn column_op_to_gate(ops: &[ElementaryOp], n: usize, m: Modulus) -> Result<GateOp> {
    let [first, second] = ops else {
        return Err(Error::UnrealizableOp(format!(
            "expected an X/Z column-operation pair, got {} operation(s)",
            ops.len()
        )));
    };
    let expected = partner_op(first, n, m)?;
    if !same_column_op(&expected, second) {
        return Err(Error::UnrealizableOp(format!(
            "'{second}' is not the partner of '{first}' (expected '{expected}')"
        )));
    }
    let x_op = if column_side_is_x(first, n) { first } else { second };
    let gate = match *x_op {
        ElementaryOp::SwapCols { a, b } => GateOp::Swap { a, b },
        ElementaryOp::ScaleCol { index, factor } => GateOp::Mult { q: m.inverse(factor)?, a: index },
        ElementaryOp::AddCols { target, source, mult } => {
            if mult == 0 {
                return Err(Error::UnrealizableOp(format!("'{x_op}' is the identity")));
            }
            GateOp::Cnot { control: source, target, power: m.neg(mult) }
        }
        _ => unreachable!("partner_op accepted a row operation"),
    };
    Ok(gate)
}

fn column_side_is_x(op: &ElementaryOp, n: usize) -> bool {
    match *op {
        ElementaryOp::SwapCols { a, .. } => a < n,
        ElementaryOp::ScaleCol { index, .. } => index < n,
        ElementaryOp::AddCols { target, .. } => target < n,
        _ => false,
    }
}

fn same_column_op(a: &ElementaryOp, b: &ElementaryOp) -> bool {
    match (*a, *b) {
        (ElementaryOp::SwapCols { a: a1, b: b1 }, ElementaryOp::SwapCols { a: a2, b: b2 }) => {
            (a1, b1) == (a2, b2) || (a1, b1) == (b2, a2)
        }
        _ => a == b,
    }
}

/// Dense unitary of a gate on `n` qudits.
pub fn gate_to_dense(g: &GateOp, m: Modulus, n: usize, bound: usize) -> Result<DenseOperator> {
    g.validate(m, n)?;
    oracle::gate_unitary(g, m, n, bound)
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateOp::Fourier { a } => write!(f, "F({})", a + 1),
            GateOp::Mult { q, a } => write!(f, "S({},{})", q, a + 1),
            GateOp::Cnot { control, target, power } => {
                write!(f, "CNOT({},{})^{}", control + 1, target + 1, power)
            }
            GateOp::Swap { a, b } => write!(f, "SWAP({},{})", a + 1, b + 1),
            GateOp::Cphase { a, b } => write!(f, "CP({},{})", a + 1, b + 1),
        }
    }
}

impl FromStr for GateOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<GateOp> {
        let syntax = |message: &str| Error::Syntax {
            position: 0,
            message: format!("{message} in gate '{s}'"),
        };
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| syntax("missing '('"))?;
        let close = s.find(')').ok_or_else(|| syntax("missing ')'"))?;
        if close < open {
            return Err(syntax("unbalanced parentheses"));
        }
        let name = s[..open].trim();
        let args: Vec<u64> = s[open + 1..close]
            .split(',')
            .map(|a| a.trim().parse::<u64>().map_err(|_| syntax("bad integer argument")))
            .collect::<Result<_>>()?;
        let tail = s[close + 1..].trim();
        let power = if let Some(e) = tail.strip_prefix('^') {
            Some(e.trim().parse::<u64>().map_err(|_| syntax("bad exponent"))?)
        } else if tail.is_empty() {
            None
        } else {
            return Err(syntax("trailing characters"));
        };
        let qudit = |v: u64| -> Result<usize> {
            if v == 0 {
                Err(syntax("qudit labels start at 1"))
            } else {
                Ok(v as usize - 1)
            }
        };
        if power.is_some() && name != "CNOT" {
            return Err(syntax("only CNOT takes a power"));
        }
        match (name, args.as_slice()) {
            ("F", [a]) => Ok(GateOp::Fourier { a: qudit(*a)? }),
            ("S", [q, a]) => Ok(GateOp::Mult { q: *q, a: qudit(*a)? }),
            ("CNOT", [a, b]) => Ok(GateOp::Cnot {
                control: qudit(*a)?,
                target: qudit(*b)?,
                power: power.unwrap_or(1),
            }),
            ("SWAP", [a, b]) => Ok(GateOp::Swap { a: qudit(*a)?, b: qudit(*b)? }),
            ("CP", [a, b]) => Ok(GateOp::Cphase { a: qudit(*a)?, b: qudit(*b)? }),
            _ => Err(syntax("unknown gate or wrong number of arguments")),
        }
    }
}

impl TryFrom<String> for GateOp {
    type Error = Error;

    fn try_from(s: String) -> Result<GateOp> {
        s.parse()
    }
}

impl From<GateOp> for String {
    fn from(g: GateOp) -> String {
        g.to_string()
    }
}

/// One gate per line.
pub fn format_gate_file(gates: &[GateOp]) -> String {
    gates.iter().map(|g| format!("{g}\n")).collect()
}

/// Parses a gate file; blank lines and `#` comments are skipped.
pub fn parse_gate_file(text: &str) -> Result<Vec<GateOp>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}
