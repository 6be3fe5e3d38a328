//! The truncated polynomial ring R = F_p[t]/(t^s).
//!
//! Elements are coefficient vectors of fixed length `s` (degrees 0..s-1),
//! each entry reduced mod `p`. Multiplication is plain convolution with
//! every power t^s and above discarded. For s = 1 the ring collapses to
//! F_p itself, which the group constructions rely on.

use std::fmt;

use crate::algebra::fp::{self, is_prime};
use crate::error::AlgebraError;

/// An element of F_p[t]/(t^s). `coeffs[k]` is the coefficient of t^k;
/// the vector always has length exactly `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl TruncPoly {
    /// Build from signed coefficients (reduced mod p). `coeffs.len()` must
    /// equal `s`; missing precision is an error rather than silent padding.
    pub fn new(p: u32, s: u32, coeffs: &[i64]) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime { p });
        }
        if s == 0 {
            return Err(AlgebraError::ZeroPrecision);
        }
        if coeffs.len() != s as usize {
            return Err(AlgebraError::CoefficientCount {
                expected: s as usize,
                got: coeffs.len(),
            });
        }
        let pp = p as i64;
        Ok(TruncPoly {
            p,
            coeffs: coeffs.iter().map(|&c| c.rem_euclid(pp) as u32).collect(),
        })
    }

    pub fn zero(p: u32, s: u32) -> Result<Self, AlgebraError> {
        Self::new(p, s, &vec![0; s as usize])
    }

    pub fn one(p: u32, s: u32) -> Result<Self, AlgebraError> {
        let mut c = vec![0i64; s as usize];
        c[0] = 1;
        Self::new(p, s, &c)
    }

    /// The element a·t + b. For s = 1 the t term truncates away.
    pub fn linear(p: u32, s: u32, a: i64, b: i64) -> Result<Self, AlgebraError> {
        let mut c = vec![0i64; s as usize];
        c[0] = b;
        if s > 1 {
            c[1] = a;
        }
        Self::new(p, s, &c)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn s(&self) -> u32 {
        self.coeffs.len() as u32
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Degree of the canonical representative, or None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    /// Units of R are exactly the elements with nonzero constant term.
    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    fn check(&self, other: &TruncPoly) -> Result<(), AlgebraError> {
        if self.p != other.p || self.coeffs.len() != other.coeffs.len() {
            return Err(AlgebraError::RingMismatch {
                left: (self.p, self.s()),
                right: (other.p, other.s()),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncPoly) -> Result<TruncPoly, AlgebraError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| fp::addm(a, b, self.p))
            .collect();
        Ok(TruncPoly { p: self.p, coeffs })
    }

    pub fn sub(&self, other: &TruncPoly) -> Result<TruncPoly, AlgebraError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| fp::subm(a, b, self.p))
            .collect();
        Ok(TruncPoly { p: self.p, coeffs })
    }

    pub fn neg(&self) -> TruncPoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| if a == 0 { 0 } else { self.p - a })
            .collect();
        TruncPoly { p: self.p, coeffs }
    }

    /// Truncated convolution: terms of degree >= s are dropped.
    pub fn mul(&self, other: &TruncPoly) -> Result<TruncPoly, AlgebraError> {
        self.check(other)?;
        let s = self.coeffs.len();
        let mut coeffs = vec![0u32; s];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j >= s {
                    break;
                }
                coeffs[i + j] = fp::addm(coeffs[i + j], fp::mulm(a, b, self.p), self.p);
            }
        }
        Ok(TruncPoly { p: self.p, coeffs })
    }

    pub fn scale(&self, c: i64) -> TruncPoly {
        let c = c.rem_euclid(self.p as i64) as u32;
        let coeffs = self.coeffs.iter().map(|&a| fp::mulm(a, c, self.p)).collect();
        TruncPoly { p: self.p, coeffs }
    }

    /// Multiplicative inverse of a unit, by back-substitution on the
    /// triangular system (sum a_i t^i)(sum b_j t^j) = 1.
    pub fn inv(&self) -> Result<TruncPoly, AlgebraError> {
        if !self.is_unit() {
            return Err(AlgebraError::NotAUnit {
                element: self.to_string(),
            });
        }
        let p = self.p;
        let s = self.coeffs.len();
        let a0_inv = modpow(self.coeffs[0], p - 2, p);
        let mut b = vec![0u32; s];
        b[0] = a0_inv;
        for k in 1..s {
            let mut acc = 0u32;
            for i in 1..=k {
                acc = fp::addm(acc, fp::mulm(self.coeffs[i], b[k - i], p), p);
            }
            b[k] = fp::mulm(if acc == 0 { 0 } else { p - acc }, a0_inv, p);
        }
        Ok(TruncPoly { p, coeffs: b })
    }

    /// Parse the textual form produced by `Display`, e.g. `1+1*t+2*t^2`.
    /// The precision `s` cannot be recovered from the text (trailing zero
    /// terms are omitted), so it is supplied by the caller.
    pub fn parse(p: u32, s: u32, text: &str) -> Result<Self, AlgebraError> {
        let mut poly = TruncPoly::zero(p, s)?;
        let text = text.trim();
        if text.is_empty() {
            return Err(AlgebraError::Parse {
                text: text.to_string(),
                reason: "empty input".to_string(),
            });
        }
        if text == "0" {
            return Ok(poly);
        }
        for term in text.split('+') {
            let term = term.trim();
            let err = |reason: &str| AlgebraError::Parse {
                text: text.to_string(),
                reason: format!("term `{term}`: {reason}"),
            };
            let (coeff_str, power) = match term.split_once('*') {
                None => (term, 0usize),
                Some((c, rest)) => match rest {
                    "t" => (c, 1),
                    _ => {
                        let exp = rest
                            .strip_prefix("t^")
                            .ok_or_else(|| err("expected `t` or `t^k` after `*`"))?;
                        let k: usize =
                            exp.parse().map_err(|_| err("bad exponent"))?;
                        (c, k)
                    }
                },
            };
            let c: i64 = coeff_str.parse().map_err(|_| err("bad coefficient"))?;
            if power >= s as usize {
                return Err(err(&format!("exponent {power} exceeds precision {s}")));
            }
            if poly.coeffs[power] != 0 {
                return Err(err("duplicate term"));
            }
            poly.coeffs[power] = c.rem_euclid(p as i64) as u32;
        }
        Ok(poly)
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

fn modpow(base: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64;
    let p = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tp(p: u32, s: u32, c: &[i64]) -> TruncPoly {
        TruncPoly::new(p, s, c).unwrap()
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            TruncPoly::new(4, 2, &[0, 0]),
            Err(AlgebraError::NotPrime { p: 4 })
        ));
        assert!(matches!(
            TruncPoly::new(2, 0, &[]),
            Err(AlgebraError::ZeroPrecision)
        ));
        assert!(matches!(
            TruncPoly::new(2, 3, &[1, 0]),
            Err(AlgebraError::CoefficientCount {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn characteristic_two_addition() {
        // (1+t) + (1+t) = 0 in F_2[t]/(t^2)
        let a = tp(2, 2, &[1, 1]);
        assert!(a.add(&a).unwrap().is_zero());
    }

    #[test]
    fn characteristic_three_addition() {
        // (1+2t) + (2+2t) = t in F_3[t]/(t^2)
        let a = tp(3, 2, &[1, 2]);
        let b = tp(3, 2, &[2, 2]);
        assert_eq!(a.add(&b).unwrap(), tp(3, 2, &[0, 1]));
    }

    #[test]
    fn truncation_kills_high_terms() {
        // (1+t)^2 = 1 + 2t + t^2 = 1 over F_2 with s = 2 (2t = 0, t^2 cut)
        let a = tp(2, 2, &[1, 1]);
        assert!(a.mul(&a).unwrap().is_one());
        // t * t = t^2 survives at s = 3
        let t = tp(2, 3, &[0, 1, 0]);
        assert_eq!(t.mul(&t).unwrap(), tp(2, 3, &[0, 0, 1]));
        // but not at s = 2
        let t2 = tp(2, 2, &[0, 1]);
        assert!(t2.mul(&t2).unwrap().is_zero());
    }

    #[test]
    fn worked_product_mod_three() {
        // (1+t)(1+t+t^2) = 1+2t+2t^2+t^3 -> 1+2t+2t^2 in F_3[t]/(t^3)
        let a = tp(3, 3, &[1, 1, 0]);
        let b = tp(3, 3, &[1, 1, 1]);
        assert_eq!(a.mul(&b).unwrap(), tp(3, 3, &[1, 2, 2]));
    }

    #[test]
    fn s_equals_one_collapses_to_fp() {
        let a = TruncPoly::linear(3, 1, 2, 1).unwrap(); // 2t+1 -> 1
        assert_eq!(a, tp(3, 1, &[1]));
        let b = tp(3, 1, &[2]);
        assert_eq!(a.mul(&b).unwrap(), tp(3, 1, &[2]));
    }

    #[test]
    fn unit_detection_and_inverse() {
        // t is not a unit; 1+t is, with inverse 1-t+t^2-... truncated
        assert!(!tp(5, 3, &[0, 1, 0]).is_unit());
        let u = tp(5, 3, &[1, 1, 0]);
        let ui = u.inv().unwrap();
        assert_eq!(ui, tp(5, 3, &[1, 4, 1])); // 1 - t + t^2
        assert!(u.mul(&ui).unwrap().is_one());
        assert!(matches!(
            tp(5, 3, &[0, 2, 3]).inv(),
            Err(AlgebraError::NotAUnit { .. })
        ));
    }

    #[test]
    fn inverse_of_every_unit() {
        for (p, s) in [(2u32, 3u32), (3, 3), (5, 2)] {
            for v in 0..(p as u64).pow(s) {
                let mut c = vec![0i64; s as usize];
                let mut v = v;
                for k in 0..s as usize {
                    c[k] = (v % p as u64) as i64;
                    v /= p as u64;
                }
                let a = tp(p, s, &c);
                if a.is_unit() {
                    assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
                } else {
                    assert!(a.inv().is_err());
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(tp(3, 3, &[0, 0, 0]).to_string(), "0");
        assert_eq!(tp(3, 3, &[2, 0, 1]).to_string(), "2+1*t^2");
        assert_eq!(tp(3, 3, &[0, 1, 0]).to_string(), "1*t");
        assert_eq!(tp(5, 4, &[1, 2, 0, 4]).to_string(), "1+2*t+4*t^3");
    }

    #[test]
    fn parse_roundtrip_exhaustive_small() {
        for (p, s) in [(2u32, 2u32), (3, 2), (2, 3)] {
            for v in 0..(p as u64).pow(s) {
                let mut c = vec![0i64; s as usize];
                let mut v = v;
                for k in 0..s as usize {
                    c[k] = (v % p as u64) as i64;
                    v /= p as u64;
                }
                let a = tp(p, s, &c);
                let back = TruncPoly::parse(p, s, &a.to_string()).unwrap();
                assert_eq!(a, back);
            }
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(TruncPoly::parse(3, 2, "").is_err());
        assert!(TruncPoly::parse(3, 2, "1+1*t^5").is_err());
        assert!(TruncPoly::parse(3, 2, "1+1").is_err()); // duplicate constant
        assert!(TruncPoly::parse(3, 2, "x").is_err());
        assert!(TruncPoly::parse(3, 2, "1*t^x").is_err());
    }

    #[test]
    fn mismatched_rings_rejected() {
        let a = tp(2, 2, &[1, 0]);
        let b = tp(3, 2, &[1, 0]);
        assert!(matches!(a.add(&b), Err(AlgebraError::RingMismatch { .. })));
        let c = tp(2, 3, &[1, 0, 0]);
        assert!(a.mul(&c).is_err());
    }

    proptest! {
        // Ring axioms on random triples across a few (p, s) shapes.
        #[test]
        fn ring_axioms(
            seed in 0u64..1u64 << 40,
            pick in 0usize..4,
        ) {
            let (p, s) = [(2u32, 2u32), (3, 3), (5, 2), (7, 4)][pick];
            let size = (p as u64).pow(s);
            let draw = |x: u64| {
                let mut c = vec![0i64; s as usize];
                let mut v = x % size;
                for k in 0..s as usize {
                    c[k] = (v % p as u64) as i64;
                    v /= p as u64;
                }
                tp(p, s, &c)
            };
            let a = draw(seed);
            let b = draw(seed.wrapping_mul(0x9e3779b97f4a7c15));
            let c = draw(seed.wrapping_mul(0xc2b2ae3d27d4eb4f));

            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert!(a.sub(&a).unwrap().is_zero());
            prop_assert_eq!(a.add(&a.neg()).unwrap().is_zero(), true);
        }
    }
}
