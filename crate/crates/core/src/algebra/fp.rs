//! Arithmetic in the prime field F_p.
//!
//! Everything downstream (truncated polynomial rings, matrix groups, cubic
//! extensions) reduces to these operations, so they are kept deliberately
//! boring: `u32` values held reduced mod `p`, with checked constructors.

use crate::error::AlgebraError;

/// Deterministic primality check by trial division. Fine for desk-scale
/// moduli; we never see `p` beyond a few hundred.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The field F_p for a validated prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime { p });
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.p
    }

    /// Embed an integer, reducing into `0..p`. Negative inputs land on the
    /// canonical representative of their residue class.
    #[inline]
    pub fn elem(&self, v: i64) -> FpElem {
        let p = self.p as i64;
        FpElem {
            value: v.rem_euclid(p) as u32,
            p: self.p,
        }
    }

    #[inline]
    pub fn zero(&self) -> FpElem {
        self.elem(0)
    }

    #[inline]
    pub fn one(&self) -> FpElem {
        self.elem(1)
    }

    /// All field elements in ascending representative order.
    pub fn elements(&self) -> impl Iterator<Item = FpElem> {
        let p = self.p;
        (0..p).map(move |value| FpElem { value, p })
    }
}

/// An element of F_p carrying its modulus, kept reduced at all times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u32,
    p: u32,
}

impl FpElem {
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FpElem) -> Result<(), AlgebraError> {
        if self.p != other.p {
            return Err(AlgebraError::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FpElem) -> Result<FpElem, AlgebraError> {
        self.check(other)?;
        Ok(FpElem {
            value: (self.value + other.value) % self.p,
            p: self.p,
        })
    }

    pub fn sub(&self, other: &FpElem) -> Result<FpElem, AlgebraError> {
        self.check(other)?;
        Ok(FpElem {
            value: (self.value + self.p - other.value) % self.p,
            p: self.p,
        })
    }

    pub fn mul(&self, other: &FpElem) -> Result<FpElem, AlgebraError> {
        self.check(other)?;
        let prod = (self.value as u64 * other.value as u64) % self.p as u64;
        Ok(FpElem {
            value: prod as u32,
            p: self.p,
        })
    }

    pub fn neg(&self) -> FpElem {
        FpElem {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }

    /// Multiplicative inverse via Fermat (a^(p-2)); errors on zero.
    pub fn inv(&self) -> Result<FpElem, AlgebraError> {
        if self.value == 0 {
            return Err(AlgebraError::ZeroInverse);
        }
        Ok(self.pow(self.p - 2))
    }

    pub fn pow(&self, mut e: u32) -> FpElem {
        let mut base = self.value as u64;
        let mut acc = 1u64;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FpElem {
            value: acc as u32,
            p: self.p,
        }
    }
}

/// Modular arithmetic on raw representatives. The matrix layer stores bare
/// coefficient words for speed and calls these directly.
#[inline]
pub(crate) fn addm(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn subm(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mulm(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}
