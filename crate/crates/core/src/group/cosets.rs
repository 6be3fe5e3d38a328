//! Left cosets gK of an enumerated subgroup inside an enumerated group.
//!
//! Representatives are canonical: scanning the ambient group in key order
//! and opening a new coset at each unassigned element makes every rep the
//! lexicographically smallest member of its coset. All downstream ids
//! (complex vertices, face lists, cache files) inherit this determinism.

use std::collections::HashMap;

use crate::error::GroupError;
use crate::group::enumerate::GroupEnumeration;
use crate::group::matrix::RingMatrix;

#[derive(Debug, Clone)]
pub struct CosetTable {
    reps: Vec<RingMatrix>,
    assign: HashMap<u128, u32>,
    subgroup_order: usize,
}

impl CosetTable {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    pub fn rep(&self, coset: u32) -> &RingMatrix {
        &self.reps[coset as usize]
    }

    pub fn reps(&self) -> &[RingMatrix] {
        &self.reps
    }

    /// Coset id of a group element, by packed key.
    pub fn coset_of_key(&self, key: u128) -> Option<u32> {
        self.assign.get(&key).copied()
    }

    pub fn coset_of(&self, m: &RingMatrix) -> Result<u32, GroupError> {
        self.coset_of_key(m.key()).ok_or(GroupError::NotInGroup)
    }
}

/// Partition `group` into left cosets of `sub`. `sub` must be a subset of
/// `group` over the same parameters (being a subgroup is the caller's
/// business; the closures built here always are).
pub fn enumerate_cosets(
    group: &GroupEnumeration,
    sub: &GroupEnumeration,
) -> Result<CosetTable, GroupError> {
    if group.params() != sub.params() {
        let (p, s, d) = group.params();
        let (p2, s2, d2) = sub.params();
        return Err(GroupError::ContextMismatch {
            left: (p, s, d),
            right: (p2, s2, d2),
        });
    }
    if sub.elements().iter().any(|m| !group.contains(m)) {
        return Err(GroupError::NotSubset);
    }
    let mut reps = Vec::new();
    let mut assign: HashMap<u128, u32> = HashMap::with_capacity(group.order());
    for g in group.elements() {
        if assign.contains_key(&g.key()) {
            continue;
        }
        let id = reps.len() as u32;
        for k in sub.elements() {
            let member = g.mul(k)?;
            let prev = assign.insert(member.key(), id);
            debug_assert!(prev.is_none(), "cosets must not overlap");
        }
        debug_assert!(assign.contains_key(&g.key()));
        reps.push(g.clone());
    }
    debug_assert_eq!(reps.len() * sub.order(), group.order());
    Ok(CosetTable {
        reps,
        assign,
        subgroup_order: sub.order(),
    })
}

/// Does g1*K1 meet g2*K2? Decided by scanning k1^{-1} (g1^{-1} g2) over K1
/// and testing membership in K2.
pub fn coset_intersects(
    g1: &RingMatrix,
    k1: &GroupEnumeration,
    g2: &RingMatrix,
    k2: &GroupEnumeration,
) -> Result<bool, GroupError> {
    if g1.params() != g2.params() || k1.params() != g1.params() || k2.params() != g1.params() {
        return Err(GroupError::ContextMismatch {
            left: g1.params(),
            right: g2.params(),
        });
    }
    let x = g1.inv()?.mul(g2)?;
    for k in k1.elements() {
        if k2.contains(&k.inv()?.mul(&x)?) {
            return Ok(true);
        }
    }
    Ok(false)
}
