//! Faces of a partite complex: sets of (type, coset-id) pairs with at most
//! one vertex per type, kept sorted by type.

use std::fmt;

use crate::error::ComplexError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    members: Vec<(u32, u32)>,
}

impl Face {
    pub fn empty() -> Self {
        Face {
            members: Vec::new(),
        }
    }

    pub fn vertex(type_id: u32, coset: u32) -> Self {
        Face {
            members: vec![(type_id, coset)],
        }
    }

    /// Build from members; types must be distinct (one vertex per color).
    pub fn new(members: &[(u32, u32)]) -> Result<Self, ComplexError> {
        let mut m = members.to_vec();
        m.sort_unstable();
        if m.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ComplexError::Parse {
                reason: format!("repeated type in face {m:?}"),
            });
        }
        Ok(Face { members: m })
    }

    pub fn members(&self) -> &[(u32, u32)] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Dimension convention: a face with k vertices has level k-1, the
    /// empty face level -1.
    pub fn level(&self) -> i32 {
        self.members.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn types(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().map(|&(t, _)| t)
    }

    pub fn contains(&self, other: &Face) -> bool {
        other
            .members
            .iter()
            .all(|m| self.members.binary_search(m).is_ok())
    }

    /// Face with the member at position `k` removed.
    pub fn drop_member(&self, k: usize) -> Face {
        let mut m = self.members.clone();
        m.remove(k);
        Face { members: m }
    }

    /// Set difference, assuming `other ⊆ self`.
    pub fn minus(&self, other: &Face) -> Face {
        Face {
            members: self
                .members
                .iter()
                .filter(|m| other.members.binary_search(m).is_err())
                .copied()
                .collect(),
        }
    }

    /// Disjoint union with `other`; errors if a type collides.
    pub fn union(&self, other: &Face) -> Result<Face, ComplexError> {
        let mut m = self.members.clone();
        m.extend_from_slice(&other.members);
        Face::new(&m)
    }

    /// All sub-faces with exactly `k` members, in sorted order.
    pub fn subsets(&self, k: usize) -> Vec<Face> {
        let n = self.members.len();
        if k > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(Face {
                members: idx.iter().map(|&i| self.members[i]).collect(),
            });
            // next combination
            let mut j = k;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if idx[j] != j + n - k {
                    break;
                }
                if j == 0 {
                    return out;
                }
            }
            idx[j] += 1;
            for l in j + 1..k {
                idx[l] = idx[l - 1] + 1;
            }
        }
    }

    /// Export line: `level;comma-joined types;comma-joined coset ids`.
    pub fn export_line(&self) -> String {
        let types: Vec<String> = self.members.iter().map(|&(t, _)| t.to_string()).collect();
        let cosets: Vec<String> = self.members.iter().map(|&(_, c)| c.to_string()).collect();
        format!("{};{};{}", self.level(), types.join(","), cosets.join(","))
    }

    pub fn parse_line(line: &str) -> Result<Face, ComplexError> {
        let bad = |reason: String| ComplexError::Parse { reason };
        let mut parts = line.trim().split(';');
        let level: i32 = parts
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| bad(format!("bad level in `{line}`")))?;
        let types = parts
            .next()
            .ok_or_else(|| bad(format!("missing types in `{line}`")))?;
        let cosets = parts
            .next()
            .ok_or_else(|| bad(format!("missing cosets in `{line}`")))?;
        if parts.next().is_some() {
            return Err(bad(format!("trailing fields in `{line}`")));
        }
        let split = |s: &str| -> Result<Vec<u32>, ComplexError> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|x| {
                    x.parse()
                        .map_err(|_| bad(format!("bad number `{x}` in `{line}`")))
                })
                .collect()
        };
        let ts = split(types)?;
        let cs = split(cosets)?;
        if ts.len() != cs.len() {
            return Err(bad(format!("type/coset count mismatch in `{line}`")));
        }
        let face = Face::new(&ts.into_iter().zip(cs).collect::<Vec<_>>())?;
        if face.level() != level {
            return Err(bad(format!("level field disagrees with size in `{line}`")));
        }
        Ok(face)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (t, c)) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}:{c}")?;
        }
        write!(f, "}}")
    }
}
