//! Dense polynomials over F_p and the field extensions F_q = F_p[y]/(mu).
//!
//! The extension degree we actually use downstream is 3 (so q = p^3), but
//! nothing here assumes that. Irreducibility is certified by trial division,
//! which at these degrees is instant and leaves no doubt.

use std::fmt;

use crate::algebra::fp::{self, is_prime};
use crate::error::AlgebraError;

/// A polynomial over F_p in dense coefficient form. `coeffs[k]` is the
/// coefficient of y^k; no trailing zeros (the zero polynomial is empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl FpPoly {
    pub fn new(p: u32, coeffs: &[i64]) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime { p });
        }
        let pp = p as i64;
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x.rem_euclid(pp) as u32).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Ok(FpPoly { p, coeffs: c })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the usual convention that the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn sub_scaled_shifted(&mut self, other: &FpPoly, c: u32, shift: usize) {
        // self -= c * y^shift * other, used by long division
        for (k, &b) in other.coeffs.iter().enumerate() {
            let idx = k + shift;
            self.coeffs[idx] = fp::subm(self.coeffs[idx], fp::mulm(c, b, self.p), self.p);
        }
    }

    /// Polynomial long division; divisor must be nonzero.
    pub fn divmod(&self, divisor: &FpPoly) -> Result<(FpPoly, FpPoly), AlgebraError> {
        if divisor.is_zero() {
            return Err(AlgebraError::ZeroInverse);
        }
        if self.p != divisor.p {
            return Err(AlgebraError::ModulusMismatch {
                left: self.p,
                right: divisor.p,
            });
        }
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = {
            let lead = *divisor.coeffs.last().unwrap();
            // lead != 0 by the no-trailing-zeros invariant
            let mut acc = 1u64;
            let mut b = lead as u64;
            let mut e = self.p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % self.p as u64;
                }
                b = b * b % self.p as u64;
                e >>= 1;
            }
            acc as u32
        };
        let mut rem = self.clone();
        let mut quot = vec![0u32; self.coeffs.len().saturating_sub(dd)];
        while rem.coeffs.len() > dd && !rem.is_zero() {
            let k = rem.coeffs.len() - 1;
            let c = fp::mulm(*rem.coeffs.last().unwrap(), lead_inv, self.p);
            quot[k - dd] = c;
            rem.sub_scaled_shifted(divisor, c, k - dd);
            while rem.coeffs.last() == Some(&0) {
                rem.coeffs.pop();
            }
        }
        let quot = FpPoly::new(
            self.p,
            &quot.iter().map(|&x| x as i64).collect::<Vec<_>>(),
        )?;
        Ok((quot, rem))
    }

    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly, AlgebraError> {
        if self.p != other.p {
            return Err(AlgebraError::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, &[]);
        }
        let mut c = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = fp::addm(c[i + j], fp::mulm(a, b, self.p), self.p);
            }
        }
        FpPoly::new(self.p, &c.iter().map(|&x| x as i64).collect::<Vec<_>>())
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "y")?,
                (1, _) => write!(f, "{c}*y")?,
                (_, 1) => write!(f, "y^{k}")?,
                (_, _) => write!(f, "{c}*y^{k}")?,
            }
        }
        Ok(())
    }
}

/// Irreducibility over F_p by trial division. A reducible polynomial of
/// degree n has a monic factor of degree at most n/2, so only those are
/// tried.
pub fn is_irreducible(poly: &FpPoly) -> bool {
    let deg = match poly.degree() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if deg == 1 {
        return true;
    }
    let p = poly.p;
    for d in 1..=deg / 2 {
        // every monic divisor candidate of degree d
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut c = vec![0i64; d + 1];
            c[d] = 1;
            let mut v = v;
            for item in c.iter_mut().take(d) {
                *item = (v % p as u64) as i64;
                v /= p as u64;
            }
            let divisor = FpPoly::new(p, &c).unwrap();
            let (_, rem) = poly.divmod(&divisor).unwrap();
            if rem.is_zero() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of the given degree, scanning candidates
/// y^deg + c_{deg-1} y^{deg-1} + ... + c_0 in counting order: the tail
/// coefficient vector is read as a base-p integer with c_0 the least
/// significant digit, i.e. the constant term varies fastest.
pub fn find_irreducible(p: u32, deg: u32) -> Result<FpPoly, AlgebraError> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime { p });
    }
    if deg == 0 {
        return Err(AlgebraError::ZeroDegree);
    }
    let count = (p as u64)
        .checked_pow(deg)
        .ok_or(AlgebraError::ZeroDegree)?;
    for v in 0..count {
        let mut c = vec![0i64; deg as usize + 1];
        c[deg as usize] = 1;
        let mut v = v;
        for item in c.iter_mut().take(deg as usize) {
            *item = (v % p as u64) as i64;
            v /= p as u64;
        }
        let candidate = FpPoly::new(p, &c)?;
        if is_irreducible(&candidate) {
            return Ok(candidate);
        }
    }
    unreachable!("monic irreducibles of every degree exist over F_p")
}

/// The field F_q = F_p[y]/(mu) for a monic irreducible mu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    modulus: FpPoly,
    deg: usize,
}

impl ExtField {
    pub fn new(modulus: FpPoly) -> Result<Self, AlgebraError> {
        if !modulus.is_monic() || !is_irreducible(&modulus) {
            return Err(AlgebraError::NotIrreducible {
                poly: modulus.to_string(),
            });
        }
        let deg = modulus.degree().unwrap();
        Ok(ExtField { modulus, deg })
    }

    /// The cubic extension F_{p^3} with the canonically chosen modulus.
    pub fn cubic(p: u32) -> Result<Self, AlgebraError> {
        Self::new(find_irreducible(p, 3)?)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.modulus.p()
    }

    #[inline]
    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        (self.p() as u64).pow(self.deg as u32)
    }

    /// Build an element from coefficients of degree < deg (shorter slices
    /// are zero-padded).
    pub fn elem(&self, coeffs: &[i64]) -> Result<ExtElem, AlgebraError> {
        if coeffs.len() > self.deg {
            return Err(AlgebraError::CoefficientCount {
                expected: self.deg,
                got: coeffs.len(),
            });
        }
        let p = self.p() as i64;
        let mut c = vec![0u32; self.deg];
        for (k, &x) in coeffs.iter().enumerate() {
            c[k] = x.rem_euclid(p) as u32;
        }
        Ok(ExtElem {
            coeffs: c,
            modulus: self.modulus.clone(),
        })
    }

    pub fn zero(&self) -> ExtElem {
        self.elem(&[]).unwrap()
    }

    pub fn one(&self) -> ExtElem {
        self.elem(&[1]).unwrap()
    }

    /// The residue class of y itself.
    pub fn gen(&self) -> ExtElem {
        self.elem(&[0, 1]).unwrap()
    }

    /// Element with index `idx` in base-p counting order (constant
    /// coefficient = least significant digit). Inverse of [`Self::index`].
    pub fn from_index(&self, idx: u64) -> ExtElem {
        let p = self.p() as u64;
        let mut c = vec![0u32; self.deg];
        let mut v = idx;
        for item in c.iter_mut() {
            *item = (v % p) as u32;
            v /= p;
        }
        ExtElem {
            coeffs: c,
            modulus: self.modulus.clone(),
        }
    }

    pub fn index(&self, e: &ExtElem) -> u64 {
        let p = self.p() as u64;
        let mut v = 0u64;
        for &c in e.coeffs.iter().rev() {
            v = v * p + c as u64;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }
}

/// An element of an extension field, carrying its defining modulus so that
/// elements of different fields cannot be silently mixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    coeffs: Vec<u32>,
    modulus: FpPoly,
}

impl ExtElem {
    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn p(&self) -> u32 {
        self.modulus.p()
    }

    fn check(&self, other: &ExtElem) -> Result<(), AlgebraError> {
        if self.modulus != other.modulus {
            return Err(AlgebraError::ExtensionMismatch {
                left: self.modulus.to_string(),
                right: other.modulus.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtElem) -> Result<ExtElem, AlgebraError> {
        self.check(other)?;
        let p = self.p();
        Ok(ExtElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| fp::addm(a, b, p))
                .collect(),
            modulus: self.modulus.clone(),
        })
    }

    pub fn sub(&self, other: &ExtElem) -> Result<ExtElem, AlgebraError> {
        self.check(other)?;
        let p = self.p();
        Ok(ExtElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| fp::subm(a, b, p))
                .collect(),
            modulus: self.modulus.clone(),
        })
    }

    pub fn neg(&self) -> ExtElem {
        let p = self.p();
        ExtElem {
            coeffs: self
                .coeffs
                .iter()
                .map(|&a| if a == 0 { 0 } else { p - a })
                .collect(),
            modulus: self.modulus.clone(),
        }
    }

    /// Product in F_q: polynomial multiplication followed by reduction
    /// modulo the defining polynomial.
    pub fn mul(&self, other: &ExtElem) -> Result<ExtElem, AlgebraError> {
        self.check(other)?;
        let p = self.p();
        let deg = self.coeffs.len();
        let a = FpPoly::new(p, &self.coeffs.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
        let b = FpPoly::new(
            p,
            &other.coeffs.iter().map(|&x| x as i64).collect::<Vec<_>>(),
        )?;
        let (_, rem) = a.mul(&b)?.divmod(&self.modulus)?;
        let mut coeffs = vec![0u32; deg];
        coeffs[..rem.coeffs().len()].copy_from_slice(rem.coeffs());
        Ok(ExtElem {
            coeffs,
            modulus: self.modulus.clone(),
        })
    }

    /// Inverse of a nonzero element via a^(q-2).
    pub fn inv(&self) -> Result<ExtElem, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroInverse);
        }
        let q = (self.p() as u64).pow(self.coeffs.len() as u32);
        self.pow(q - 2)
    }

    pub fn pow(&self, mut e: u64) -> Result<ExtElem, AlgebraError> {
        let mut acc = ExtElem {
            coeffs: {
                let mut c = vec![0u32; self.coeffs.len()];
                c[0] = 1;
                c
            },
            modulus: self.modulus.clone(),
        };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }
}
