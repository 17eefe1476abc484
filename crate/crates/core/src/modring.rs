//! Arithmetic in the residue ring Z_D.
//!
//! Residues are plain `u64` values kept in the canonical range `[0, D)`.
//! Every operation on [`Modulus`] returns a canonical residue, so matrices of
//! residues can be compared and hashed directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of Z_D, always stored in `[0, D)`.
pub type Residue = u64;

/// Extended Euclid: returns `(g, u, v)` with `g = gcd(a, b) >= 0` and
/// `u*a + v*b = g`.
pub fn gcd_ext(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The modulus D of the ring Z_D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(d: u64) -> Result<Self> {
        Modulus::new(d)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Modulus {
    /// `d` must satisfy `2 <= d < 2^32` so that products of two residues fit
    /// in a `u64` without overflow.
    pub fn new(d: u64) -> Result<Self> {
        if d < 2 || d > u32::MAX as u64 {
            return Err(Error::InvalidModulus(d));
        }
        Ok(Modulus(d))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, v: u64) -> Residue {
        v % self.0
    }

    #[inline]
    pub fn reduce_signed(self, v: i64) -> Residue {
        v.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: Residue, b: Residue) -> Residue {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: Residue, b: Residue) -> Residue {
        (a + self.0 - b % self.0) % self.0
    }

    #[inline]
    pub fn neg(self, a: Residue) -> Residue {
        (self.0 - a % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: Residue, b: Residue) -> Residue {
        (a % self.0) * (b % self.0) % self.0
    }

    pub fn pow(self, base: Residue, mut exp: u64) -> Residue {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Inner product of two residue vectors.
    pub fn dot(self, a: &[Residue], b: &[Residue]) -> Residue {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// gcd(a, D); the canonical generator of the ideal `a·Z_D`.
    #[inline]
    pub fn ideal(self, a: Residue) -> u64 {
        gcd(a % self.0, self.0)
    }

    pub fn is_unit(self, q: Residue) -> bool {
        self.ideal(q) == 1
    }

    pub fn inverse(self, q: Residue) -> Result<Residue> {
        let q = q % self.0;
        let (g, u, _) = gcd_ext(q as i64, self.0 as i64);
        if g != 1 {
            return Err(Error::NotAUnit {
                value: q,
                modulus: self.0,
            });
        }
        Ok(self.reduce_signed(u))
    }

    /// Returns `c` with `gcd(a + c*b, D) = gcd(a, b, D)`.
    ///
    /// Writing `g = gcd(a, b, D)`, `a = g a'`, `N = D / g`, the largest divisor
    /// of `N` coprime to `a'` works: a prime of `N` either divides `a'` (then
    /// it misses `b'` and `c`) or divides `c` (then `a' + c b' = a'` mod it).
    pub fn stab_coeff(self, a: Residue, b: Residue) -> Residue {
        let (a, b, d) = (a % self.0, b % self.0, self.0);
        let g = gcd(gcd(a, b), d);
        if gcd(a, d) == g {
            return 0;
        }
        let a_red = a / g;
        let mut m = d / g;
        loop {
            let common = gcd(m, a_red);
            if common == 1 {
                break;
            }
            m /= common;
        }
        m % d
    }

    /// Splits `a` as `u * gcd(a, D)` with `u` a unit; returns `u`.
    ///
    /// For `a = 0` the unit is 1.
    pub fn unit_part(self, a: Residue) -> Residue {
        let a = a % self.0;
        if a == 0 {
            return 1;
        }
        let g = self.ideal(a);
        let w = a / g;
        let step = self.0 / g;
        // w is coprime to D/g; lift it to a unit of Z_D along w + c*(D/g).
        let c = self.stab_coeff(w, step);
        self.add(w, self.mul(c, step))
    }

    /// True when `a` lies in the ideal generated by `d` (which must divide D).
    #[inline]
    pub fn divides(self, d: u64, a: Residue) -> bool {
        let d = if d == 0 { self.0 } else { d };
        (a % self.0) % d == 0
    }
}
