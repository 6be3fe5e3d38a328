//! Generator sets, breadth-first closure, and explicit membership tests
//! for the subgroups K_S of SL_d(R) generated by the cyclic families of
//! elementary matrices.
//!
//! Throughout, types are labeled 1..=d and index arithmetic wraps: the
//! generator family of type j is e_{j,j+1}(a*t + b) with j+1 read mod d.
//! K_S is the subgroup generated by all families whose type is NOT in S;
//! S = {} gives the whole group, S = {1..d} the trivial subgroup.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use crate::algebra::TruncPoly;
use crate::error::GroupError;
use crate::group::matrix::RingMatrix;

/// Hard default ceiling for closure sizes; anything bigger than this is not
/// a desk-scale experiment and the caller should know.
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 25;

/// Ceiling for the brute-force determinant scan, expressed as a bound on
/// the raw coefficient space p^(s*d^2).
pub const BRUTEFORCE_DOMAIN_CAP: u128 = 1 << 30;

/// A named family of generators: all elementary matrices e_{j,j+1}(a*t+b)
/// with (a, b) != (0, 0), for every type j outside the omitted set.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    p: u32,
    s: u32,
    d: u32,
    omitted: Vec<u32>,
    gens: Vec<RingMatrix>,
}

fn normalize_type_set(d: u32, set: &[u32]) -> Result<Vec<u32>, GroupError> {
    let mut v: Vec<u32> = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != set.len() || v.iter().any(|&i| i == 0 || i > d) {
        return Err(GroupError::BadTypeSet { d });
    }
    Ok(v)
}

impl GeneratorSet {
    /// Generators of the full group (no omitted types).
    pub fn full(p: u32, s: u32, d: u32) -> Result<Self, GroupError> {
        Self::omitting(p, s, d, &[])
    }

    /// Generators of the maximal subgroup K_i (one omitted type).
    pub fn maximal(p: u32, s: u32, d: u32, i: u32) -> Result<Self, GroupError> {
        if i == 0 || i > d {
            return Err(GroupError::TypeOutOfRange { i, d });
        }
        Self::omitting(p, s, d, &[i])
    }

    /// Generators of K_S for an arbitrary omitted set S (sorted, in-range,
    /// duplicates rejected). S may be empty or all of 1..=d.
    pub fn omitting(p: u32, s: u32, d: u32, set: &[u32]) -> Result<Self, GroupError> {
        // parameter validation happens inside the identity constructor
        let _probe = RingMatrix::identity(p, s, d)?;
        let omitted = normalize_type_set(d, set)?;
        let mut gens = Vec::new();
        let mut seen = HashMap::new();
        for j in 1..=d {
            if omitted.binary_search(&j).is_ok() {
                continue;
            }
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let r = TruncPoly::linear(p, s, a, b).unwrap();
                    if r.is_zero() {
                        // s = 1 collapses a*t to zero
                        continue;
                    }
                    let e = RingMatrix::elementary(p, s, d, j as i64, j as i64 + 1, &r)?;
                    if seen.insert(e.key(), ()).is_none() {
                        gens.push(e);
                    }
                }
            }
        }
        Ok(GeneratorSet {
            p,
            s,
            d,
            omitted,
            gens,
        })
    }

    pub fn params(&self) -> (u32, u32, u32) {
        (self.p, self.s, self.d)
    }

    pub fn omitted(&self) -> &[u32] {
        &self.omitted
    }

    pub fn generators(&self) -> &[RingMatrix] {
        &self.gens
    }
}

/// A fully enumerated finite matrix group (or subgroup), sorted by packed
/// key so that element order, dump order, and coset-representative choice
/// are all deterministic.
#[derive(Debug, Clone)]
pub struct GroupEnumeration {
    p: u32,
    s: u32,
    d: u32,
    omitted: Vec<u32>,
    elements: Vec<RingMatrix>,
    index: HashMap<u128, u32>,
}

impl GroupEnumeration {
    fn from_elements(
        p: u32,
        s: u32,
        d: u32,
        omitted: Vec<u32>,
        mut elements: Vec<RingMatrix>,
    ) -> Self {
        elements.sort_by_key(RingMatrix::key);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.key(), i as u32))
            .collect();
        GroupEnumeration {
            p,
            s,
            d,
            omitted,
            elements,
            index,
        }
    }

    pub fn params(&self) -> (u32, u32, u32) {
        (self.p, self.s, self.d)
    }

    pub fn omitted(&self) -> &[u32] {
        &self.omitted
    }

    /// Short name for cache keys: `full`, or `k<types>` joined with `-`.
    pub fn label(&self) -> String {
        if self.omitted.is_empty() {
            "full".to_string()
        } else {
            let parts: Vec<String> = self.omitted.iter().map(u32::to_string).collect();
            format!("k{}", parts.join("-"))
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[RingMatrix] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &RingMatrix {
        &self.elements[i as usize]
    }

    pub fn contains(&self, m: &RingMatrix) -> bool {
        m.params() == (self.p, self.s, self.d) && self.index.contains_key(&m.key())
    }

    pub fn contains_key(&self, key: u128) -> bool {
        self.index.contains_key(&key)
    }

    pub fn position(&self, m: &RingMatrix) -> Option<u32> {
        self.index.get(&m.key()).copied()
    }

    /// Elements lying in both enumerations (same parameters assumed checked
    /// by the caller); returned in this enumeration's order.
    pub fn intersection_elements(&self, other: &GroupEnumeration) -> Vec<RingMatrix> {
        self.elements
            .iter()
            .filter(|m| other.contains_key(m.key()))
            .cloned()
            .collect()
    }

    /// Serialize one matrix per line, `|`-separated row-major entries, in
    /// element (= key) order. This is the cache dump format.
    pub fn write_dump(&self, mut w: impl Write) -> io::Result<()> {
        for m in &self.elements {
            writeln!(w, "{m}")?;
        }
        Ok(())
    }

    /// Parse a dump written by [`Self::write_dump`]. Elements are re-sorted
    /// and re-indexed, and duplicates are rejected.
    pub fn read_dump(
        p: u32,
        s: u32,
        d: u32,
        omitted: &[u32],
        r: impl BufRead,
    ) -> Result<Self, GroupError> {
        let omitted = normalize_type_set(d, omitted)?;
        let mut elements = Vec::new();
        for line in r.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            elements.push(RingMatrix::parse(p, s, d, &line)?);
        }
        if elements.is_empty() {
            return Err(GroupError::Parse {
                reason: "empty dump".to_string(),
            });
        }
        let g = Self::from_elements(p, s, d, omitted, elements);
        if g.index.len() != g.elements.len() {
            return Err(GroupError::Parse {
                reason: "duplicate elements in dump".to_string(),
            });
        }
        Ok(g)
    }
}

/// Enumerate the group generated by `gens` as the right-multiplication
/// closure of the identity. The generator families here contain inverses
/// (e(r)^{-1} = e(-r)), so this closure is the full subgroup. Aborts once
/// more than `cap` distinct elements appear.
pub fn bfs_closure(gens: &GeneratorSet, cap: usize) -> Result<GroupEnumeration, GroupError> {
    let (p, s, d) = gens.params();
    let id = RingMatrix::identity(p, s, d)?;
    let mut index: HashMap<u128, ()> = HashMap::new();
    index.insert(id.key(), ());
    let mut elements = vec![id];
    let mut head = 0usize;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in gens.generators() {
            let next = current.mul(g)?;
            let key = next.key();
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                e.insert(());
                if elements.len() + 1 > cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                elements.push(next);
            }
        }
    }
    Ok(GroupEnumeration::from_elements(
        p,
        s,
        d,
        gens.omitted().to_vec(),
        elements,
    ))
}

/// Independent enumeration of SL_d(R): scan every d x d matrix over R and
/// keep those with determinant 1. Guarded so nobody asks for a scan over
/// more than 2^30 raw matrices.
pub fn special_linear_bruteforce(p: u32, s: u32, d: u32) -> Result<GroupEnumeration, GroupError> {
    let _probe = RingMatrix::identity(p, s, d)?;
    let digits = (s * d * d) as u32;
    let total = (p as u128)
        .checked_pow(digits)
        .filter(|&t| t <= BRUTEFORCE_DOMAIN_CAP)
        .ok_or_else(|| {
            let bits = (digits as f64 * (p as f64).log2()).ceil() as u32;
            GroupError::BruteforceTooLarge { bits }
        })?;
    let mut elements = Vec::new();
    for key in 0..total {
        let m = RingMatrix::from_key(p, s, d, key)?;
        if m.det().is_one() {
            elements.push(m);
        }
    }
    Ok(GroupEnumeration::from_elements(p, s, d, vec![], elements))
}

/// Explicit membership test for K_S (S nonempty): the matrix must be
/// unipotent, entries whose cyclic index interval meets S must vanish, and
/// every other off-diagonal entry (i, j) may only carry degrees up to
/// min((j - i) mod d, s - 1).
///
/// The interval for entry (i, j) is the set of types {i, i+1, ..., j-1}
/// read cyclically in 1-based labels — the generator families a path from
/// i to j would have to cross.
pub fn ks_membership(s_set: &[u32], m: &RingMatrix) -> Result<bool, GroupError> {
    let (p, s, d) = m.params();
    let _ = p;
    let omitted = normalize_type_set(d, s_set)?;
    if omitted.is_empty() {
        return Err(GroupError::BadTypeSet { d });
    }
    for i in 0..d {
        for j in 0..d {
            let e = m.entry(i, j);
            if i == j {
                if !e.is_one() {
                    return Ok(false);
                }
                continue;
            }
            let dist = (j + d - i) % d;
            let blocked = (0..dist).any(|k| {
                let label = ((i + k) % d) + 1;
                omitted.binary_search(&label).is_ok()
            });
            if blocked {
                if !e.is_zero() {
                    return Ok(false);
                }
            } else {
                let cap = dist.min(s - 1) as usize;
                if let Some(deg) = e.degree() {
                    if deg > cap {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
