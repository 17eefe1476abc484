//! Generalized Pauli products `ω^λ X^x Z^z` on n qudits of dimension D.
//!
//! Per qudit the X power is written to the left of the Z power. With
//! `XZ = ωZX`, moving `Z^a` past `X^b` costs `ω^{-ab}`, so
//!
//! ```text
//! (ω^λ1 X^x1 Z^z1)(ω^λ2 X^x2 Z^z2) = ω^{λ1 + λ2 - z1·x2} X^{x1+x2} Z^{z1+z2}
//! ```
//!
//! The dense oracle tests pin this rule against explicit matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{Modulus, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliProduct {
    modulus: Modulus,
    phase: Residue,
    x: Vec<Residue>,
    z: Vec<Residue>,
}

impl PauliProduct {
    pub fn identity(modulus: Modulus, n: usize) -> Self {
        PauliProduct {
            modulus,
            phase: 0,
            x: vec![0; n],
            z: vec![0; n],
        }
    }

    /// Builds `ω^phase X^x Z^z`, reducing every exponent mod D.
    ///
    /// Panics if `x` and `z` differ in length.
    pub fn new(modulus: Modulus, phase: u64, x: Vec<u64>, z: Vec<u64>) -> Self {
        assert_eq!(x.len(), z.len(), "x and z exponent vectors differ in length");
        let red = |v: Vec<u64>| v.into_iter().map(|e| modulus.reduce(e)).collect();
        PauliProduct {
            modulus,
            phase: modulus.reduce(phase),
            x: red(x),
            z: red(z),
        }
    }

    /// Single-qudit `X_q^e` (0-based qudit index).
    pub fn x_on(modulus: Modulus, n: usize, qudit: usize, e: u64) -> Self {
        let mut p = Self::identity(modulus, n);
        p.x[qudit] = modulus.reduce(e);
        p
    }

    /// Single-qudit `Z_q^e` (0-based qudit index).
    pub fn z_on(modulus: Modulus, n: usize, qudit: usize, e: u64) -> Self {
        let mut p = Self::identity(modulus, n);
        p.z[qudit] = modulus.reduce(e);
        p
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn num_qudits(&self) -> usize {
        self.x.len()
    }

    pub fn phase(&self) -> Residue {
        self.phase
    }

    pub fn x(&self) -> &[Residue] {
        &self.x
    }

    pub fn z(&self) -> &[Residue] {
        &self.z
    }

    /// The `(x | z)` row of length 2n.
    pub fn symplectic(&self) -> Vec<Residue> {
        self.x.iter().chain(&self.z).copied().collect()
    }

    pub fn with_phase(mut self, phase: u64) -> Self {
        self.phase = self.modulus.reduce(phase);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_scalar()
    }

    /// True when the operator is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&e| e == 0)
    }

    pub(crate) fn check_compatible(&self, other: &PauliProduct) -> Result<()> {
        if self.modulus != other.modulus || self.x.len() != other.x.len() {
            return Err(Error::DimensionMismatch {
                left_d: self.modulus.get(),
                left_n: self.x.len(),
                right_d: other.modulus.get(),
                right_n: other.x.len(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &PauliProduct) -> Result<PauliProduct> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliProduct) -> PauliProduct {
        let m = self.modulus;
        let cross = m.dot(&self.z, &other.x);
        PauliProduct {
            modulus: m,
            phase: m.sub(m.add(self.phase, other.phase), cross),
            x: self.x.iter().zip(&other.x).map(|(&a, &b)| m.add(a, b)).collect(),
            z: self.z.iter().zip(&other.z).map(|(&a, &b)| m.add(a, b)).collect(),
        }
    }

    /// `λ12` with `p1 p2 = ω^λ12 p2 p1`, i.e. `x1·z2 - z1·x2` mod D.
    pub fn commutation_phase(&self, other: &PauliProduct) -> Result<Residue> {
        self.check_compatible(other)?;
        let m = self.modulus;
        Ok(m.sub(m.dot(&self.x, &other.z), m.dot(&self.z, &other.x)))
    }

    pub fn commutes(&self, other: &PauliProduct) -> Result<bool> {
        Ok(self.commutation_phase(other)? == 0)
    }

    /// `p^e` by square-and-multiply over the group law.
    pub fn power(&self, mut e: u64) -> PauliProduct {
        let mut acc = PauliProduct::identity(self.modulus, self.num_qudits());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Smallest `m >= 1` with `p^m = I`, found by iteration.
    ///
    /// For even D this can exceed D (e.g. `XZ` has order 4 when D = 2).
    pub fn order(&self) -> Result<u64> {
        let d = self.modulus.get();
        let cap = 2 * d * d;
        let mut acc = self.clone();
        for m in 1..=cap {
            if acc.is_identity() {
                return Ok(m);
            }
            acc = acc.mul_unchecked(self);
        }
        Err(Error::Internal(format!(
            "order of {self} not found within {cap} steps"
        )))
    }

    /// Parses the text form used by stabilizer files, e.g. `w^2 X1^3 Z2^2`.
    ///
    /// Factors are multiplied left to right, so `Z1 X1` is accepted and
    /// picks up the reordering phase. Qudit labels are 1-based.
    pub fn parse(text: &str, modulus: Modulus, n: usize) -> Result<PauliProduct> {
        parse::parse_pauli(text, modulus, n)
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.phase != 0 {
            parts.push(pow_str("w", self.phase));
        }
        for q in 0..self.num_qudits() {
            if self.x[q] != 0 {
                parts.push(pow_str(&format!("X{}", q + 1), self.x[q]));
            }
            if self.z[q] != 0 {
                parts.push(pow_str(&format!("Z{}", q + 1), self.z[q]));
            }
        }
        if parts.is_empty() {
            return write!(f, "I");
        }
        write!(f, "{}", parts.join(" "))
    }
}

fn pow_str(base: &str, e: u64) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

mod parse {
    use super::*;

    struct Cursor<'a> {
        text: &'a str,
        pos: usize,
    }

    impl<'a> Cursor<'a> {
        fn peek(&self) -> Option<char> {
            self.text[self.pos..].chars().next()
        }

        fn bump(&mut self) -> Option<char> {
            let c = self.peek()?;
            self.pos += c.len_utf8();
            Some(c)
        }

        fn skip_ws(&mut self) {
            while matches!(self.peek(), Some(c) if c.is_whitespace() || c == '*') {
                self.bump();
            }
        }

        fn error(&self, message: impl Into<String>) -> Error {
            Error::Syntax {
                position: self.pos,
                message: message.into(),
            }
        }

        fn number(&mut self) -> Result<i64> {
            let start = self.pos;
            if self.peek() == Some('-') {
                self.bump();
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
            self.text[start..self.pos].parse::<i64>().map_err(|_| Error::Syntax {
                position: start,
                message: "expected an integer".into(),
            })
        }

        fn exponent(&mut self) -> Result<i64> {
            if self.peek() == Some('^') {
                self.bump();
                self.number()
            } else {
                Ok(1)
            }
        }
    }

    pub(super) fn parse_pauli(text: &str, modulus: Modulus, n: usize) -> Result<PauliProduct> {
        let mut cur = Cursor { text, pos: 0 };
        let mut acc = PauliProduct::identity(modulus, n);
        let mut seen_any = false;
        loop {
            cur.skip_ws();
            let start = cur.pos;
            let Some(c) = cur.bump() else { break };
            seen_any = true;
            match c {
                'w' | 'ω' => {
                    let e = cur.exponent()?;
                    acc.phase = modulus.add(acc.phase, modulus.reduce_signed(e));
                }
                'I' => {}
                'X' | 'Z' => {
                    let label = cur.number()?;
                    if label < 1 || label as usize > n {
                        return Err(Error::IndexOutOfRange {
                            index: label.max(0) as usize,
                            limit: n,
                        });
                    }
                    let q = label as usize - 1;
                    let e = modulus.reduce_signed(cur.exponent()?);
                    let factor = if c == 'X' {
                        PauliProduct::x_on(modulus, n, q, e)
                    } else {
                        PauliProduct::z_on(modulus, n, q, e)
                    };
                    acc = acc.mul_unchecked(&factor);
                }
                other => {
                    return Err(Error::Syntax {
                        position: start,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
            if let Some(next) = cur.peek() {
                if !(next.is_whitespace() || next == '*') {
                    return Err(cur.error(format!("unexpected character {next:?}")));
                }
            }
        }
        if !seen_any {
            return Err(cur.error("empty Pauli product"));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let m = md(4);
        let p = PauliProduct::new(m, 3, vec![1, 2], vec![3, 0]);
        let id = PauliProduct::identity(m, 2);
        assert_eq!(p.multiply(&id).unwrap(), p);
        assert_eq!(id.multiply(&p).unwrap(), p);
    }

    #[test]
    fn x_then_z_is_canonical() {
        let m = md(5);
        let x = PauliProduct::x_on(m, 1, 0, 1);
        let z = PauliProduct::z_on(m, 1, 0, 1);
        assert_eq!(x.multiply(&z).unwrap(), PauliProduct::new(m, 0, vec![1], vec![1]));
        // ZX = ω^{-1} XZ
        assert_eq!(z.multiply(&x).unwrap(), PauliProduct::new(m, 4, vec![1], vec![1]));
    }

    #[test]
    fn dimension_mismatch() {
        let a = PauliProduct::identity(md(3), 2);
        let b = PauliProduct::identity(md(3), 3);
        let c = PauliProduct::identity(md(4), 2);
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.commutes(&c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn commutation_examples() {
        let m2 = md(2);
        let x = PauliProduct::x_on(m2, 1, 0, 1);
        let z = PauliProduct::z_on(m2, 1, 0, 1);
        assert_eq!(x.commutation_phase(&x).unwrap(), 0);
        assert_eq!(x.commutation_phase(&z).unwrap(), 1);

        let m = md(7);
        let p1 = PauliProduct::parse("X1 Z2", m, 2).unwrap();
        let p2 = PauliProduct::parse("Z1 X2", m, 2).unwrap();
        assert_eq!(p1.commutation_phase(&p2).unwrap(), 0);

        for d in 2..10 {
            let m = md(d);
            let x = PauliProduct::x_on(m, 1, 0, 1);
            let z = PauliProduct::z_on(m, 1, 0, 1);
            assert!(!x.commutes(&z).unwrap());
        }
        let m4 = md(4);
        let x2 = PauliProduct::x_on(m4, 1, 0, 2);
        let z2 = PauliProduct::z_on(m4, 1, 0, 2);
        assert!(x2.commutes(&z2).unwrap());
    }

    #[test]
    fn powers() {
        for d in 2..13 {
            let m = md(d);
            let z = PauliProduct::z_on(m, 1, 0, 1);
            assert!(z.power(0).is_identity());
            assert!(z.power(d).is_identity());
        }
        let m2 = md(2);
        let xz = PauliProduct::new(m2, 0, vec![1], vec![1]);
        // (XZ)^2 = -I = ω I for D = 2
        assert_eq!(xz.power(2), PauliProduct::identity(m2, 1).with_phase(1));
    }

    #[test]
    fn orders() {
        assert_eq!(PauliProduct::identity(md(5), 3).order().unwrap(), 1);
        assert_eq!(PauliProduct::z_on(md(6), 1, 0, 1).order().unwrap(), 6);
        assert_eq!(PauliProduct::new(md(2), 0, vec![1], vec![1]).order().unwrap(), 4);
        assert_eq!(PauliProduct::new(md(3), 0, vec![1], vec![1]).order().unwrap(), 3);
        assert_eq!(PauliProduct::identity(md(6), 1).with_phase(2).order().unwrap(), 3);
    }

    #[test]
    fn parse_examples() {
        let m = md(4);
        let p = PauliProduct::parse("w^2 X1^3 Z2^2", m, 2).unwrap();
        assert_eq!(p.phase(), 2);
        assert_eq!(p.x(), &[3, 0]);
        assert_eq!(p.z(), &[0, 2]);
        assert!(PauliProduct::parse("I", m, 2).unwrap().is_identity());
        assert_eq!(
            PauliProduct::parse("X3", m, 2),
            Err(Error::IndexOutOfRange { index: 3, limit: 2 })
        );
    }

    #[test]
    fn parse_reorders_with_phase() {
        let m = md(5);
        let p = PauliProduct::parse("Z1 X1", m, 1).unwrap();
        assert_eq!(p, PauliProduct::new(m, 4, vec![1], vec![1]));
        let q = PauliProduct::parse("X1^-1", m, 1).unwrap();
        assert_eq!(q.x(), &[4]);
        let r = PauliProduct::parse("w^7 X1^5", m, 1).unwrap();
        assert!(r.is_scalar());
        assert_eq!(r.phase(), 2);
    }

    #[test]
    fn parse_errors_carry_position() {
        let m = md(3);
        match PauliProduct::parse("X1 Y2", m, 2) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(PauliProduct::parse("X", m, 2), Err(Error::Syntax { .. })));
        assert!(matches!(PauliProduct::parse("", m, 2), Err(Error::Syntax { .. })));
        assert!(matches!(PauliProduct::parse("X1^", m, 2), Err(Error::Syntax { .. })));
        assert!(matches!(PauliProduct::parse("X1Z2", m, 2), Err(Error::Syntax { .. })));
    }

    #[test]
    fn format_examples() {
        let m = md(4);
        assert_eq!(PauliProduct::identity(m, 2).to_string(), "I");
        assert_eq!(
            PauliProduct::new(m, 2, vec![3, 0], vec![0, 2]).to_string(),
            "w^2 X1^3 Z2^2"
        );
        assert_eq!(PauliProduct::identity(m, 2).with_phase(1).to_string(), "w");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_pauli() -> impl Strategy<Value = PauliProduct> {
            (prop::sample::select(vec![2u64, 3, 4, 6]), 1usize..=3).prop_flat_map(|(d, n)| {
                (
                    0..d,
                    prop::collection::vec(0..d, n),
                    prop::collection::vec(0..d, n),
                )
                    .prop_map(move |(ph, x, z)| PauliProduct::new(md(d), ph, x, z))
            })
        }

        fn arb_triple() -> impl Strategy<Value = (PauliProduct, PauliProduct, PauliProduct)> {
            (prop::sample::select(vec![2u64, 3, 4, 6]), 1usize..=2).prop_flat_map(|(d, n)| {
                let one = move || {
                    (
                        0..d,
                        prop::collection::vec(0..d, n),
                        prop::collection::vec(0..d, n),
                    )
                        .prop_map(move |(ph, x, z)| PauliProduct::new(md(d), ph, x, z))
                };
                (one(), one(), one())
            })
        }

        proptest! {
            #[test]
            fn format_parse_round_trip(p in arb_pauli()) {
                let text = p.to_string();
                let back = PauliProduct::parse(&text, p.modulus(), p.num_qudits()).unwrap();
                prop_assert_eq!(back, p);
            }

            #[test]
            fn associativity((a, b, c) in arb_triple()) {
                let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
                let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn commutation_phase_antisymmetric((a, b, _c) in arb_triple()) {
                let m = a.modulus();
                let ab = a.commutation_phase(&b).unwrap();
                let ba = b.commutation_phase(&a).unwrap();
                prop_assert_eq!(ab, m.neg(ba));
                // p1 p2 = ω^λ12 p2 p1
                let lhs = a.multiply(&b).unwrap();
                let rhs = b.multiply(&a).unwrap();
                prop_assert_eq!(lhs.phase(), m.add(rhs.phase(), ab));
            }

            #[test]
            fn power_matches_repeated_product(p in arb_pauli(), e in 0u64..30) {
                let mut acc = PauliProduct::identity(p.modulus(), p.num_qudits());
                for _ in 0..e {
                    acc = acc.multiply(&p).unwrap();
                }
                prop_assert_eq!(p.power(e), acc);
            }
        }
    }
}
