//! Square matrices over R = F_p[t]/(t^s), stored as flat coefficient words
//! for cheap hashing and fast closure enumeration.
//!
//! Entry (i, j) of a d x d matrix occupies the `s` words starting at
//! `(i*d + j)*s`, lowest degree first, rows outermost. That layout is also
//! the serialization order, so the packed integer key below sorts matrices
//! exactly like their dumped text lines.

use std::fmt;

use crate::algebra::fp::{self, is_prime};
use crate::algebra::TruncPoly;
use crate::error::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingMatrix {
    p: u32,
    s: u32,
    d: u32,
    c: Vec<u32>,
}

impl RingMatrix {
    fn validate_params(p: u32, s: u32, d: u32) -> Result<(), GroupError> {
        if !is_prime(p) {
            return Err(crate::error::AlgebraError::NotPrime { p }.into());
        }
        if s == 0 {
            return Err(crate::error::AlgebraError::ZeroPrecision.into());
        }
        if d < 2 {
            return Err(GroupError::DimensionTooSmall { d });
        }
        // the packed key must fit in 128 bits
        let digits = (d * d * s) as u64;
        let bits = (digits as f64 * (p as f64).log2()).ceil() as u32;
        if bits > 128 {
            return Err(GroupError::KeyOverflow { bits });
        }
        Ok(())
    }

    pub fn identity(p: u32, s: u32, d: u32) -> Result<Self, GroupError> {
        Self::validate_params(p, s, d)?;
        let mut c = vec![0u32; (d * d * s) as usize];
        for i in 0..d {
            c[((i * d + i) * s) as usize] = 1;
        }
        Ok(RingMatrix { p, s, d, c })
    }

    /// The elementary matrix I + r*E_{i,j}. Indices are 1-based and taken
    /// cyclically: any integer is reduced into 1..=d first, so `d+1` means 1.
    /// The reduced indices must differ.
    pub fn elementary(p: u32, s: u32, d: u32, i: i64, j: i64, r: &TruncPoly) -> Result<Self, GroupError> {
        if r.p() != p || r.s() != s {
            return Err(GroupError::ContextMismatch {
                left: (p, s, d),
                right: (r.p(), r.s(), d),
            });
        }
        let ii = (i - 1).rem_euclid(d as i64) as u32;
        let jj = (j - 1).rem_euclid(d as i64) as u32;
        if ii == jj {
            return Err(GroupError::EqualIndices { i });
        }
        let mut m = Self::identity(p, s, d)?;
        let base = ((ii * d + jj) * s) as usize;
        m.c[base..base + s as usize].copy_from_slice(r.coeffs());
        Ok(m)
    }

    /// Build a matrix from explicit entries, row-major (`d*d` of them, all
    /// over the same ring).
    pub fn from_entries(p: u32, s: u32, d: u32, entries: &[TruncPoly]) -> Result<Self, GroupError> {
        Self::validate_params(p, s, d)?;
        if entries.len() != (d * d) as usize {
            return Err(GroupError::Parse {
                reason: format!("expected {} entries, got {}", d * d, entries.len()),
            });
        }
        let mut m = Self::identity(p, s, d)?;
        for (k, e) in entries.iter().enumerate() {
            if e.p() != p || e.s() != s {
                return Err(GroupError::ContextMismatch {
                    left: (p, s, d),
                    right: (e.p(), e.s(), d),
                });
            }
            m.set_entry(k as u32 / d, k as u32 % d, e);
        }
        Ok(m)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn s(&self) -> u32 {
        self.s
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn params(&self) -> (u32, u32, u32) {
        (self.p, self.s, self.d)
    }

    /// Entry at 0-based row `i`, column `j`.
    pub fn entry(&self, i: u32, j: u32) -> TruncPoly {
        let base = ((i * self.d + j) * self.s) as usize;
        let coeffs: Vec<i64> = self.c[base..base + self.s as usize]
            .iter()
            .map(|&x| x as i64)
            .collect();
        TruncPoly::new(self.p, self.s, &coeffs).unwrap()
    }

    fn set_entry(&mut self, i: u32, j: u32, v: &TruncPoly) {
        let base = ((i * self.d + j) * self.s) as usize;
        self.c[base..base + self.s as usize].copy_from_slice(v.coeffs());
    }

    pub fn is_identity(&self) -> bool {
        for i in 0..self.d {
            for j in 0..self.d {
                let base = ((i * self.d + j) * self.s) as usize;
                let e = &self.c[base..base + self.s as usize];
                let want_lead = u32::from(i == j);
                if e[0] != want_lead || e[1..].iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }

    fn check(&self, other: &RingMatrix) -> Result<(), GroupError> {
        if self.params() != other.params() {
            return Err(GroupError::ContextMismatch {
                left: self.params(),
                right: other.params(),
            });
        }
        Ok(())
    }

    /// Matrix product over R, with the truncated convolution inlined on the
    /// flat coefficient words (this is the closure enumeration hot path).
    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix, GroupError> {
        self.check(other)?;
        let (p, s, d) = (self.p, self.s as usize, self.d as usize);
        let mut c = vec![0u32; d * d * s];
        for i in 0..d {
            for l in 0..d {
                let a = &self.c[(i * d + l) * s..(i * d + l + 1) * s];
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..d {
                    let b = &other.c[(l * d + j) * s..(l * d + j + 1) * s];
                    let out = &mut c[(i * d + j) * s..(i * d + j + 1) * s];
                    for (k1, &ak) in a.iter().enumerate() {
                        if ak == 0 {
                            continue;
                        }
                        for (k2, &bk) in b.iter().enumerate().take(s - k1) {
                            out[k1 + k2] = fp::addm(out[k1 + k2], fp::mulm(ak, bk, p), p);
                        }
                    }
                }
            }
        }
        Ok(RingMatrix {
            p: self.p,
            s: self.s,
            d: self.d,
            c,
        })
    }

    /// Determinant by cofactor expansion; d is tiny here, so the factorial
    /// blowup is irrelevant and exactness is what matters.
    pub fn det(&self) -> TruncPoly {
        let d = self.d as usize;
        let entries: Vec<TruncPoly> = (0..d * d)
            .map(|k| self.entry((k / d) as u32, (k % d) as u32))
            .collect();
        det_rec(&entries, d, self.p, self.s)
    }

    /// Inverse via the adjugate. Fails unless det is a unit of R (for the
    /// groups built here det = 1, but the check keeps the operation total).
    pub fn inv(&self) -> Result<RingMatrix, GroupError> {
        let det = self.det();
        let det_inv = det.inv().map_err(|_| GroupError::NotInvertible {
            det: det.to_string(),
        })?;
        let d = self.d as usize;
        let entries: Vec<TruncPoly> = (0..d * d)
            .map(|k| self.entry((k / d) as u32, (k % d) as u32))
            .collect();
        let mut out = Self::identity(self.p, self.s, self.d)?;
        for i in 0..d {
            for j in 0..d {
                // adjugate: (i,j) of the inverse is the (j,i) cofactor / det
                let minor = minor_of(&entries, d, j, i);
                let mut cof = det_rec(&minor, d - 1, self.p, self.s);
                if (i + j) % 2 == 1 {
                    cof = cof.neg();
                }
                out.set_entry(i as u32, j as u32, &cof.mul(&det_inv).unwrap());
            }
        }
        debug_assert!(self.mul(&out).unwrap().is_identity());
        Ok(out)
    }

    /// The commutator g^{-1} h^{-1} g h.
    pub fn commutator(&self, other: &RingMatrix) -> Result<RingMatrix, GroupError> {
        self.check(other)?;
        let gi = self.inv()?;
        let hi = other.inv()?;
        gi.mul(&hi)?.mul(self)?.mul(other)
    }

    /// Pack the coefficient words into one base-p integer, first word most
    /// significant. Sorting by key equals sorting by serialized text.
    pub fn key(&self) -> u128 {
        let mut k = 0u128;
        for &w in &self.c {
            k = k * self.p as u128 + w as u128;
        }
        k
    }

    /// Rebuild a matrix from its packed key.
    pub fn from_key(p: u32, s: u32, d: u32, mut key: u128) -> Result<Self, GroupError> {
        Self::validate_params(p, s, d)?;
        let n = (d * d * s) as usize;
        let mut c = vec![0u32; n];
        for w in c.iter_mut().rev() {
            *w = (key % p as u128) as u32;
            key /= p as u128;
        }
        if key != 0 {
            return Err(GroupError::Parse {
                reason: "key out of range for these parameters".to_string(),
            });
        }
        Ok(RingMatrix { p, s, d, c })
    }

    /// Parse one serialized line (entries `|`-separated, row-major).
    pub fn parse(p: u32, s: u32, d: u32, line: &str) -> Result<Self, GroupError> {
        Self::validate_params(p, s, d)?;
        let parts: Vec<&str> = line.trim().split('|').collect();
        if parts.len() != (d * d) as usize {
            return Err(GroupError::Parse {
                reason: format!("expected {} entries, got {}", d * d, parts.len()),
            });
        }
        let mut m = Self::identity(p, s, d)?;
        for (k, part) in parts.iter().enumerate() {
            let poly = TruncPoly::parse(p, s, part).map_err(|e| GroupError::Parse {
                reason: e.to_string(),
            })?;
            m.set_entry((k as u32) / d, (k as u32) % d, &poly);
        }
        Ok(m)
    }
}

fn minor_of(entries: &[TruncPoly], d: usize, skip_row: usize, skip_col: usize) -> Vec<TruncPoly> {
    let mut out = Vec::with_capacity((d - 1) * (d - 1));
    for i in 0..d {
        if i == skip_row {
            continue;
        }
        for j in 0..d {
            if j == skip_col {
                continue;
            }
            out.push(entries[i * d + j].clone());
        }
    }
    out
}

fn det_rec(entries: &[TruncPoly], d: usize, p: u32, s: u32) -> TruncPoly {
    if d == 1 {
        return entries[0].clone();
    }
    let mut acc = TruncPoly::zero(p, s).unwrap();
    for j in 0..d {
        if entries[j].is_zero() {
            continue;
        }
        let minor = minor_of(entries, d, 0, j);
        let mut term = entries[j].mul(&det_rec(&minor, d - 1, p, s)).unwrap();
        if j % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term).unwrap();
    }
    acc
}

impl fmt::Display for RingMatrix {
    /// Row-major, `|`-separated entries in the truncated-polynomial text
    /// form — one matrix per line in group dumps.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.d * self.d {
            if k > 0 {
                write!(f, "|")?;
            }
            write!(f, "{}", self.entry(k / self.d, k % self.d))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(p: u32, s: u32, a: i64, b: i64) -> TruncPoly {
        TruncPoly::linear(p, s, a, b).unwrap()
    }

    #[test]
    fn identity_properties() {
        let id = RingMatrix::identity(2, 2, 3).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.mul(&id).unwrap(), id);
        assert!(id.det().is_one());
        assert_eq!(id.key(), {
            // diag ones at positions 0, 4, 8 of 9 entries, s=2 words each
            (1u128 << 17) + (1 << 9) + 2
        });
    }

    #[test]
    fn rejects_bad_params() {
        assert!(RingMatrix::identity(4, 2, 3).is_err());
        assert!(RingMatrix::identity(2, 0, 3).is_err());
        assert!(matches!(
            RingMatrix::identity(2, 2, 1),
            Err(GroupError::DimensionTooSmall { d: 1 })
        ));
        // 2^(s*d*d) needs more than 128 bits
        assert!(matches!(
            RingMatrix::identity(2, 10, 4),
            Err(GroupError::KeyOverflow { .. })
        ));
    }

    #[test]
    fn elementary_wraparound() {
        let r = lin(2, 2, 1, 1);
        // j = d+1 wraps to column 1
        let e = RingMatrix::elementary(2, 2, 3, 3, 4, &r).unwrap();
        assert_eq!(e.entry(2, 0), r);
        assert!(e.entry(0, 1).is_zero());
        let e2 = RingMatrix::elementary(2, 2, 3, 0, 1, &r).unwrap(); // 0 ≡ 3
        assert_eq!(e, RingMatrix::elementary(2, 2, 3, 3, 1, &r).unwrap());
        assert_eq!(e2.entry(2, 0), r);
        assert!(matches!(
            RingMatrix::elementary(2, 2, 3, 2, 5, &r),
            Err(GroupError::EqualIndices { .. })
        ));
    }

    #[test]
    fn elementary_product_adds_parameters() {
        // e_{12}(r1) e_{12}(r2) = e_{12}(r1 + r2)
        let r1 = lin(3, 2, 1, 2);
        let r2 = lin(3, 2, 2, 2);
        let e1 = RingMatrix::elementary(3, 2, 3, 1, 2, &r1).unwrap();
        let e2 = RingMatrix::elementary(3, 2, 3, 1, 2, &r2).unwrap();
        let sum = RingMatrix::elementary(3, 2, 3, 1, 2, &r1.add(&r2).unwrap()).unwrap();
        assert_eq!(e1.mul(&e2).unwrap(), sum);
    }

    #[test]
    fn elementary_inverse_negates() {
        let r = lin(5, 3, 2, 3);
        let e = RingMatrix::elementary(5, 3, 4, 2, 3, &r).unwrap();
        let ei = e.inv().unwrap();
        assert_eq!(ei, RingMatrix::elementary(5, 3, 4, 2, 3, &r.neg()).unwrap());
        assert!(e.mul(&ei).unwrap().is_identity());
    }

    #[test]
    fn determinant_of_elementaries_is_one() {
        for (p, s, d) in [(2u32, 2u32, 3u32), (3, 3, 3), (2, 2, 4)] {
            let r = lin(p, s, 1, 1);
            for i in 1..=d as i64 {
                let e = RingMatrix::elementary(p, s, d, i, i + 1, &r).unwrap();
                assert!(e.det().is_one());
            }
        }
    }

    #[test]
    fn known_commutator_identity() {
        // With [g,h] = g^{-1} h^{-1} g h and E13*E32 = E12, expanding
        // (I - rE13 - qE32 + rqE12)(I + rE13 + qE32 + rqE12) gives
        // [e_{13}(r), e_{32}(q)] = e_{12}(rq).
        let p = 3;
        let s = 3;
        let r = lin(p, s, 1, 2);
        let q = lin(p, s, 2, 1);
        let a = RingMatrix::elementary(p, s, 3, 1, 3, &r).unwrap();
        let b = RingMatrix::elementary(p, s, 3, 3, 2, &q).unwrap();
        let lhs = a.commutator(&b).unwrap();
        let rq = r.mul(&q).unwrap();
        let rhs = RingMatrix::elementary(p, s, 3, 1, 2, &rq).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_against_straightforward_oracle() {
        // multiply via the TruncPoly API as an independent reference
        let p = 3;
        let s = 2;
        let d = 3;
        let a = RingMatrix::elementary(p, s, d, 1, 2, &lin(p, s, 1, 2))
            .unwrap()
            .mul(&RingMatrix::elementary(p, s, d, 2, 3, &lin(p, s, 2, 0)).unwrap())
            .unwrap();
        let b = RingMatrix::elementary(p, s, d, 3, 1, &lin(p, s, 1, 1)).unwrap();
        let fast = a.mul(&b).unwrap();
        for i in 0..d {
            for j in 0..d {
                let mut acc = TruncPoly::zero(p, s).unwrap();
                for l in 0..d {
                    acc = acc.add(&a.entry(i, l).mul(&b.entry(l, j)).unwrap()).unwrap();
                }
                assert_eq!(fast.entry(i, j), acc);
            }
        }
    }

    #[test]
    fn inverse_roundtrip_random_products() {
        let p = 2;
        let s = 2;
        let d = 3;
        let gens: Vec<RingMatrix> = (1..=3)
            .flat_map(|i| {
                [(0i64, 1i64), (1, 0), (1, 1)]
                    .iter()
                    .map(move |&(a, b)| {
                        RingMatrix::elementary(p, s, d, i, i + 1, &lin(p, s, a, b)).unwrap()
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        // deterministic pseudo-random walk over the generators
        let mut m = RingMatrix::identity(p, s, d).unwrap();
        let mut state = 12345u64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            m = m.mul(&gens[(state >> 33) as usize % gens.len()]).unwrap();
            let mi = m.inv().unwrap();
            assert!(m.mul(&mi).unwrap().is_identity());
            assert!(mi.mul(&m).unwrap().is_identity());
            assert!(m.det().is_one());
        }
    }

    #[test]
    fn key_roundtrip_and_order_matches_text() {
        let p = 3;
        let s = 2;
        let d = 3;
        let mut ms = vec![RingMatrix::identity(p, s, d).unwrap()];
        for i in 1..=3i64 {
            for (a, b) in [(1i64, 0i64), (0, 2), (2, 1)] {
                ms.push(RingMatrix::elementary(p, s, d, i, i + 1, &lin(p, s, a, b)).unwrap());
            }
        }
        for m in &ms {
            let k = m.key();
            assert_eq!(RingMatrix::from_key(p, s, d, k).unwrap(), *m);
        }
        let mut by_key = ms.clone();
        by_key.sort_by_key(|m| m.key());
        let mut by_words: Vec<RingMatrix> = ms.clone();
        by_words.sort_by(|a, b| a.c.cmp(&b.c));
        assert_eq!(by_key, by_words);
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let m = RingMatrix::elementary(2, 2, 3, 1, 2, &lin(2, 2, 1, 1)).unwrap();
        let line = m.to_string();
        assert_eq!(line, "1|1+1*t|0|0|1|0|0|0|1");
        assert_eq!(RingMatrix::parse(2, 2, 3, &line).unwrap(), m);
        let id = RingMatrix::identity(3, 3, 2).unwrap();
        assert_eq!(id.to_string(), "1|0|0|1");
        assert_eq!(RingMatrix::parse(3, 3, 2, "1|0|0|1").unwrap(), id);
        assert!(RingMatrix::parse(3, 3, 2, "1|0|0").is_err());
        assert!(RingMatrix::parse(3, 3, 2, "1|0|0|junk").is_err());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        // a matrix with det = t (not a unit): diag(t, 1, 1)... det carefully:
        let p = 2;
        let s = 2;
        let d = 2;
        let mut m = RingMatrix::identity(p, s, d).unwrap();
        m.set_entry(0, 0, &TruncPoly::new(p, s, &[0, 1]).unwrap());
        assert_eq!(m.det().to_string(), "1*t");
        assert!(matches!(m.inv(), Err(GroupError::NotInvertible { .. })));
    }
}
