//! The coset complex: vertices are cosets of the maximal subgroups K_i
//! inside G = SL_d(R), a set of cosets forms a face exactly when the cosets
//! share a group element, and every group element g contributes the top
//! face {g K_1, ..., g K_d}.
//!
//! Faces are stored level by level with exact rational weights: top faces
//! uniform, and each lower level given by
//!
//! ```text
//! w(f) = (1 / (level(f) + 2)) * sum of w over the cofaces of f,
//! ```
//!
//! which makes every level sum to 1. Links reweight by the base face and a
//! binomial factor so the same identity holds inside the link.

pub mod face;
mod link;

pub use face::Face;
pub use link::{local_link, local_link_graph, local_link_pair, LinkView, LocalLink};

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use num_traits::{One, Zero};

use crate::error::ComplexError;
use crate::group::{bfs_closure, enumerate_cosets, CosetTable, GeneratorSet, GroupEnumeration};
use crate::Weight;

/// Binomial coefficient as an exact weight numerator; desk-scale arguments
/// only.
pub(crate) fn binom(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

#[derive(Debug, Clone)]
pub struct WeightedComplex {
    p: u32,
    s: u32,
    d: u32,
    group_order: usize,
    subgroups: Vec<GroupEnumeration>,
    tables: Vec<CosetTable>,
    levels: Vec<Vec<Face>>,
    weights: Vec<Vec<Weight>>,
    index: Vec<HashMap<Face, u32>>,
}

/// Build the whole complex for SL_d(F_p[t]/(t^s)). `cap` bounds the group
/// closure size (see [`crate::group::DEFAULT_CLOSURE_CAP`]).
pub fn build_complex(p: u32, s: u32, d: u32, cap: usize) -> Result<WeightedComplex, ComplexError> {
    let group = bfs_closure(&GeneratorSet::full(p, s, d)?, cap)?;
    let mut subgroups = Vec::with_capacity(d as usize);
    let mut tables = Vec::with_capacity(d as usize);
    for i in 1..=d {
        let k = bfs_closure(&GeneratorSet::maximal(p, s, d, i)?, cap)?;
        tables.push(enumerate_cosets(&group, &k)?);
        subgroups.push(k);
    }

    // top faces: one candidate per group element, deduplicated
    let mut tops: HashMap<Face, ()> = HashMap::with_capacity(group.order());
    for g in group.elements() {
        let members: Vec<(u32, u32)> = (0..d)
            .map(|i| {
                let coset = tables[i as usize]
                    .coset_of_key(g.key())
                    .expect("every group element lies in some coset");
                (i + 1, coset)
            })
            .collect();
        tops.insert(Face::new(&members)?, ());
    }
    let mut top_faces: Vec<Face> = tops.into_keys().collect();
    top_faces.sort_unstable();

    let dim = d as usize - 1;
    let mut levels: Vec<Vec<Face>> = vec![Vec::new(); dim + 1];
    let mut weights: Vec<Vec<Weight>> = vec![Vec::new(); dim + 1];
    let top_count = top_faces.len() as i128;
    weights[dim] = vec![Weight::new(1, top_count); top_faces.len()];
    levels[dim] = top_faces;

    // close downward, accumulating the balance recursion as we go
    for l in (0..dim).rev() {
        let mut acc: HashMap<Face, Weight> = HashMap::new();
        for (face, w) in levels[l + 1].iter().zip(&weights[l + 1]) {
            for k in 0..face.size() {
                let sub = face.drop_member(k);
                *acc.entry(sub).or_insert_with(Weight::zero) += w;
            }
        }
        let mut faces: Vec<Face> = acc.keys().cloned().collect();
        faces.sort_unstable();
        let scale = Weight::new(1, l as i128 + 2);
        weights[l] = faces.iter().map(|f| acc[f] * scale).collect();
        levels[l] = faces;
    }

    let index = levels
        .iter()
        .map(|faces| {
            faces
                .iter()
                .enumerate()
                .map(|(i, f)| (f.clone(), i as u32))
                .collect()
        })
        .collect();

    Ok(WeightedComplex {
        p,
        s,
        d,
        group_order: group.order(),
        subgroups,
        tables,
        levels,
        weights,
        index,
    })
}

impl WeightedComplex {
    pub fn params(&self) -> (u32, u32, u32) {
        (self.p, self.s, self.d)
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// Dimension of the complex (top faces have this level).
    pub fn dim(&self) -> i32 {
        self.d as i32 - 1
    }

    pub fn subgroup(&self, type_id: u32) -> &GroupEnumeration {
        &self.subgroups[type_id as usize - 1]
    }

    pub fn table(&self, type_id: u32) -> &CosetTable {
        &self.tables[type_id as usize - 1]
    }

    /// Faces of one level, sorted. Level must be in 0..=dim.
    pub fn faces(&self, level: i32) -> Result<&[Face], ComplexError> {
        self.check_level(level)?;
        Ok(&self.levels[level as usize])
    }

    pub fn face_count(&self, level: i32) -> Result<usize, ComplexError> {
        Ok(self.faces(level)?.len())
    }

    fn check_level(&self, level: i32) -> Result<(), ComplexError> {
        if level < 0 || level > self.dim() {
            return Err(ComplexError::LevelOutOfRange {
                level,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, face: &Face) -> bool {
        if face.is_empty() {
            return true;
        }
        let l = face.level();
        l <= self.dim() && self.index[l as usize].contains_key(face)
    }

    /// Exact balanced weight; the empty face has weight 1.
    pub fn weight(&self, face: &Face) -> Result<Weight, ComplexError> {
        if face.is_empty() {
            return Ok(Weight::one());
        }
        self.check_level(face.level())?;
        let l = face.level() as usize;
        let i = self.index[l]
            .get(face)
            .ok_or_else(|| ComplexError::FaceNotFound {
                face: face.to_string(),
            })?;
        Ok(self.weights[l][*i as usize])
    }

    pub(crate) fn level_weights(&self, level: usize) -> &[Weight] {
        &self.weights[level]
    }

    /// Every level must sum to 1 and every face must satisfy the downward
    /// recursion against its cofaces. Returns the first violation.
    pub fn verify_balanced(&self) -> Result<(), ComplexError> {
        verify_balance_tables(&self.levels, &self.weights)
    }

    /// Re-derive the downward closure from the top faces and compare: every
    /// stored face must appear (no orphans) and nothing extra may exist.
    pub fn verify_pure(&self) -> Result<(), ComplexError> {
        let dim = self.dim() as usize;
        for l in (0..dim).rev() {
            let mut derived: HashMap<&Face, bool> = HashMap::new();
            let mut scratch: Vec<Face> = Vec::new();
            for face in &self.levels[l + 1] {
                for k in 0..face.size() {
                    scratch.push(face.drop_member(k));
                }
            }
            for f in &scratch {
                match self.index[l].get(f) {
                    Some(&i) => {
                        derived.insert(&self.levels[l][i as usize], true);
                    }
                    None => {
                        return Err(ComplexError::Inconsistent {
                            reason: format!("face {f} derived from above is not stored"),
                        })
                    }
                }
            }
            if let Some(orphan) = self.levels[l].iter().find(|f| !derived.contains_key(f)) {
                return Err(ComplexError::NotPure {
                    face: orphan.to_string(),
                    level: l as i32,
                });
            }
        }
        Ok(())
    }

    /// Partiteness: types of every face are distinct (structural in
    /// [`Face`]) and every top face carries all d types.
    pub fn verify_partite(&self) -> Result<(), ComplexError> {
        for face in &self.levels[self.dim() as usize] {
            let types: Vec<u32> = face.types().collect();
            if types != (1..=self.d).collect::<Vec<u32>>() {
                return Err(ComplexError::Inconsistent {
                    reason: format!("top face {face} does not carry all {} types", self.d),
                });
            }
        }
        // vertex ids must be valid coset ids for their type
        for face in &self.levels[0] {
            let (t, c) = face.members()[0];
            if t == 0 || t > self.d || c as usize >= self.tables[t as usize - 1].count() {
                return Err(ComplexError::Inconsistent {
                    reason: format!("vertex {face} out of range"),
                });
            }
        }
        Ok(())
    }

    /// Serialize every face, level by level: `level;types;cosets` lines.
    pub fn write_faces(&self, mut w: impl Write) -> io::Result<()> {
        for faces in &self.levels {
            for f in faces {
                writeln!(w, "{}", f.export_line())?;
            }
        }
        Ok(())
    }

    /// Parse a face dump and check it is exactly this complex's face set.
    pub fn check_face_dump(&self, r: impl BufRead) -> Result<(), ComplexError> {
        let mut seen: Vec<Vec<Face>> = vec![Vec::new(); self.dim() as usize + 1];
        for line in r.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f = Face::parse_line(&line)?;
            self.check_level(f.level())?;
            seen[f.level() as usize].push(f);
        }
        for (l, (stored, read)) in self.levels.iter().zip(&seen).enumerate() {
            if stored != read {
                return Err(ComplexError::Inconsistent {
                    reason: format!("face dump disagrees with complex at level {l}"),
                });
            }
        }
        Ok(())
    }
}


/// Balance verification shared by the complex and its links: level sums
/// are 1, and each face's weight is 1/(level+2) times the sum over its
/// cofaces. The first violated identity is reported.
pub(crate) fn verify_balance_tables(
    levels: &[Vec<Face>],
    weights: &[Vec<Weight>],
) -> Result<(), ComplexError> {
    for (l, (faces, ws)) in levels.iter().zip(weights).enumerate() {
        let total: Weight = ws.iter().fold(Weight::zero(), |a, w| a + w);
        if !total.is_one() {
            return Err(ComplexError::BadLevelTotal {
                level: l as i32,
                total: total.to_string(),
            });
        }
        if l + 1 < levels.len() {
            // recursion against the level above
            let mut acc: HashMap<&Face, Weight> =
                faces.iter().map(|f| (f, Weight::zero())).collect();
            for (face, w) in levels[l + 1].iter().zip(&weights[l + 1]) {
                for k in 0..face.size() {
                    let sub = face.drop_member(k);
                    if let Some(entry) = acc.get_mut(&sub) {
                        *entry += w;
                    } else {
                        return Err(ComplexError::Inconsistent {
                            reason: format!("coface of unknown face {sub}"),
                        });
                    }
                }
            }
            let scale = Weight::new(1, l as i128 + 2);
            for (face, w) in faces.iter().zip(ws) {
                let expected = acc[face] * scale;
                if expected != *w {
                    return Err(ComplexError::Unbalanced {
                        level: l as i32,
                        face: face.to_string(),
                        expected: expected.to_string(),
                        found: w.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}
