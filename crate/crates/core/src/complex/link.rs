//! Links of faces, with weights rescaled so that balance holds inside the
//! link, and the standalone two-type "local" link built directly from
//! subgroup cosets without constructing the whole complex.
//!
//! For a base face f and a link face ρ (disjoint from f, with f ∪ ρ in the
//! complex), the link weight is
//!
//! ```text
//! w_f(ρ) = w(f ∪ ρ) / ( w(f) * C(|f| + |ρ|, |f|) ).
//! ```
//!
//! The binomial factor counts the orderings in which the balance recursion
//! can peel f ∪ ρ down to f, and is exactly what makes every level of the
//! link sum to 1 again; plain division by w(f) alone does not.

use std::collections::HashMap;

use num_traits::Zero;

use crate::complex::face::Face;
use crate::complex::{binom, verify_balance_tables, WeightedComplex};
use crate::error::ComplexError;
use crate::group::{
    bfs_closure, enumerate_cosets, CosetTable, GeneratorSet, GroupEnumeration,
    DEFAULT_CLOSURE_CAP,
};
use crate::spectral::graph::WeightedGraph;
use crate::Weight;

/// The link of a face: faces disjoint from the base whose union with it
/// lies in the complex, reweighted to a balanced complex in its own right.
#[derive(Debug, Clone)]
pub struct LinkView {
    base: Face,
    levels: Vec<Vec<Face>>,
    weights: Vec<Vec<Weight>>,
}

impl LinkView {
    pub fn base(&self) -> &Face {
        &self.base
    }

    /// Dimension of the link as a complex (-1 if only the empty face).
    pub fn dim(&self) -> i32 {
        self.levels.len() as i32 - 1
    }

    pub fn faces(&self, level: i32) -> Result<&[Face], ComplexError> {
        self.check_level(level)?;
        Ok(&self.levels[level as usize])
    }

    pub fn weights(&self, level: i32) -> Result<&[Weight], ComplexError> {
        self.check_level(level)?;
        Ok(&self.weights[level as usize])
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

    /// Same invariants as for the full complex: every level sums to 1 and
    /// the downward recursion holds face by face.
    pub fn verify_balanced(&self) -> Result<(), ComplexError> {
        verify_balance_tables(&self.levels, &self.weights)
    }

    /// The weighted graph on link vertices and link edges. Vertex labels
    /// are `t<type>:c<coset>`.
    pub fn skeleton_graph(&self) -> Result<WeightedGraph, ComplexError> {
        if self.dim() < 0 {
            return Err(ComplexError::EmptyLink {
                face: self.base.to_string(),
            });
        }
        let vertices = &self.levels[0];
        let ids: HashMap<&Face, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, f)| (f, i as u32))
            .collect();
        let mut edges = Vec::new();
        if self.dim() >= 1 {
            for (f, w) in self.levels[1].iter().zip(&self.weights[1]) {
                let m = f.members();
                let u = ids[&Face::vertex(m[0].0, m[0].1)];
                let v = ids[&Face::vertex(m[1].0, m[1].1)];
                edges.push((u, v, *w));
            }
        }
        let labels = vertices
            .iter()
            .map(|f| {
                let (t, c) = f.members()[0];
                format!("t{t}:c{c}")
            })
            .collect();
        let g = WeightedGraph::new(vertices.len(), edges).map_err(|e| {
            ComplexError::Inconsistent {
                reason: format!("link skeleton of {}: {e}", self.base),
            }
        })?;
        g.with_labels(labels).map_err(|e| ComplexError::Inconsistent {
            reason: e.to_string(),
        })
    }
}

impl WeightedComplex {
    /// The link of `base`, which must be a face of the complex (the empty
    /// face gives the complex itself, reweighted trivially).
    pub fn link(&self, base: &Face) -> Result<LinkView, ComplexError> {
        if !self.contains(base) {
            return Err(ComplexError::FaceNotFound {
                face: base.to_string(),
            });
        }
        let base_weight = self.weight(base)?;
        let b = base.size();
        let link_levels = (self.dim() - b as i32 + 1).max(0) as usize;
        let mut levels: Vec<Vec<(Face, Weight)>> = vec![Vec::new(); link_levels];
        for lx in b..=self.dim() as usize {
            let scale = Weight::new(1, binom((b + (lx - b) + 1) as u64, b as u64)) / base_weight;
            for (face, w) in self.faces(lx as i32)?.iter().zip(self.level_weights(lx)) {
                if face.contains(base) {
                    levels[lx - b].push((face.minus(base), *w * scale));
                }
            }
        }
        finish_link(base.clone(), levels)
    }

    /// All links with bases at one level, assembled in a single sweep over
    /// the complex (much cheaper than calling [`Self::link`] per base).
    /// Returned in base-face order.
    pub fn links_at_level(&self, b: i32) -> Result<Vec<(Face, LinkView)>, ComplexError> {
        if b == -1 {
            return Ok(vec![(Face::empty(), self.link(&Face::empty())?)]);
        }
        let bases = self.faces(b)?;
        let base_ids: HashMap<&Face, usize> =
            bases.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let bsize = b as usize + 1;
        let link_levels = (self.dim() - b) as usize;
        let mut buckets: Vec<Vec<Vec<(Face, Weight)>>> =
            vec![vec![Vec::new(); link_levels]; bases.len()];
        for lx in bsize..=self.dim() as usize {
            for (face, w) in self.faces(lx as i32)?.iter().zip(self.level_weights(lx)) {
                let scale = Weight::new(1, binom((lx + 1) as u64, bsize as u64));
                for sub in face.subsets(bsize) {
                    if let Some(&i) = base_ids.get(&sub) {
                        buckets[i][lx - bsize].push((face.minus(&sub), *w * scale));
                    }
                }
            }
        }
        bases
            .iter()
            .zip(buckets)
            .map(|(base, mut levels)| {
                let bw = self.weight(base)?;
                for level in &mut levels {
                    for entry in level.iter_mut() {
                        entry.1 = entry.1 / bw;
                    }
                }
                Ok((base.clone(), finish_link(base.clone(), levels)?))
            })
            .collect()
    }
}

fn finish_link(
    base: Face,
    mut levels: Vec<Vec<(Face, Weight)>>,
) -> Result<LinkView, ComplexError> {
    // directly below the base there is only the empty link face; drop the
    // trailing empty levels a top-level base would produce
    while levels.last().is_some_and(Vec::is_empty) {
        levels.pop();
    }
    let mut faces = Vec::with_capacity(levels.len());
    let mut weights = Vec::with_capacity(levels.len());
    for mut level in levels {
        level.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        faces.push(level.iter().map(|(f, _)| f.clone()).collect());
        weights.push(level.into_iter().map(|(_, w)| w).collect());
    }
    Ok(LinkView {
        base,
        levels: faces,
        weights,
    })
}

/// A two-type link computed directly from the group structure: the
/// bipartite graph on cosets of H_i = K_{S ∪ {i}} and H_j = K_{S ∪ {j}}
/// inside H = K_S, S = [d] \ {i, j}, with one edge per element of H
/// (weights 1/|H| accumulated, so parallel pairs merge exactly).
#[derive(Debug)]
pub struct LocalLink {
    types: (u32, u32),
    graph: WeightedGraph,
    ambient: GroupEnumeration,
    side_subgroups: (GroupEnumeration, GroupEnumeration),
    side_tables: (CosetTable, CosetTable),
}

impl LocalLink {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn into_graph(self) -> WeightedGraph {
        self.graph
    }

    pub fn types(&self) -> (u32, u32) {
        self.types
    }

    pub fn ambient(&self) -> &GroupEnumeration {
        &self.ambient
    }

    pub fn side_subgroups(&self) -> (&GroupEnumeration, &GroupEnumeration) {
        (&self.side_subgroups.0, &self.side_subgroups.1)
    }

    pub fn side_tables(&self) -> (&CosetTable, &CosetTable) {
        (&self.side_tables.0, &self.side_tables.1)
    }

    /// Vertices 0..left_count are cosets of the first side's subgroup.
    pub fn left_count(&self) -> usize {
        self.side_tables.0.count()
    }
}

/// Local link for an arbitrary (unordered) pair of distinct types.
pub fn local_link_pair(
    p: u32,
    s: u32,
    d: u32,
    i: u32,
    j: u32,
    cap: usize,
) -> Result<LocalLink, ComplexError> {
    if i == 0 || i > d {
        return Err(crate::error::GroupError::TypeOutOfRange { i, d }.into());
    }
    if j == 0 || j > d || i == j {
        return Err(crate::error::GroupError::TypeOutOfRange { i: j, d }.into());
    }
    let s_set: Vec<u32> = (1..=d).filter(|&k| k != i && k != j).collect();
    let with_i: Vec<u32> = (1..=d).filter(|&k| k != j).collect();
    let with_j: Vec<u32> = (1..=d).filter(|&k| k != i).collect();
    let h = bfs_closure(&GeneratorSet::omitting(p, s, d, &s_set)?, cap)?;
    let hi = bfs_closure(&GeneratorSet::omitting(p, s, d, &with_i)?, cap)?;
    let hj = bfs_closure(&GeneratorSet::omitting(p, s, d, &with_j)?, cap)?;
    let ti = enumerate_cosets(&h, &hi)?;
    let tj = enumerate_cosets(&h, &hj)?;
    let n1 = ti.count();
    let n = n1 + tj.count();
    let per_element = Weight::new(1, h.order() as i128);
    let mut acc: HashMap<(u32, u32), Weight> = HashMap::new();
    for g in h.elements() {
        let u = ti.coset_of(g)?;
        let v = tj.coset_of(g)? + n1 as u32;
        *acc.entry((u, v)).or_insert_with(Weight::zero) += per_element;
    }
    let edges: Vec<(u32, u32, Weight)> = {
        let mut es: Vec<_> = acc.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        es.sort_unstable_by_key(|&(u, v, _)| (u, v));
        es
    };
    let labels: Vec<String> = (0..n1)
        .map(|c| format!("t{i}:c{c}"))
        .chain((0..tj.count()).map(|c| format!("t{j}:c{c}")))
        .collect();
    let graph = WeightedGraph::new(n, edges)
        .map_err(|e| ComplexError::Inconsistent {
            reason: format!("local link ({i},{j}): {e}"),
        })?
        .with_labels(labels)
        .map_err(|e| ComplexError::Inconsistent {
            reason: e.to_string(),
        })?;
    Ok(LocalLink {
        types: (i, j),
        graph,
        ambient: h,
        side_subgroups: (hi, hj),
        side_tables: (ti, tj),
    })
}

/// Local link for the consecutive pair (i, i+1 mod d) — the generic case
/// whose graph matches the two-type slice of an actual vertex link.
pub fn local_link(p: u32, s: u32, d: u32, i: u32) -> Result<LocalLink, ComplexError> {
    let j = i % d + 1;
    local_link_pair(p, s, d, i, j, DEFAULT_CLOSURE_CAP)
}

/// Just the graph of [`local_link`].
pub fn local_link_graph(p: u32, s: u32, d: u32, i: u32) -> Result<WeightedGraph, ComplexError> {
    Ok(local_link(p, s, d, i)?.into_graph())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    fn tiny() -> WeightedComplex {
        build_complex(2, 1, 2, DEFAULT_CLOSURE_CAP).unwrap()
    }

    fn small() -> WeightedComplex {
        build_complex(2, 1, 3, DEFAULT_CLOSURE_CAP).unwrap()
    }

    #[test]
    fn empty_face_link_is_the_complex() {
        let x = tiny();
        let lv = x.link(&Face::empty()).unwrap();
        assert_eq!(lv.dim(), x.dim());
        for l in 0..=x.dim() {
            assert_eq!(lv.faces(l).unwrap(), x.faces(l).unwrap());
            let lw = lv.weights(l).unwrap();
            for (f, w) in lv.faces(l).unwrap().iter().zip(lw) {
                assert_eq!(x.weight(f).unwrap(), *w);
            }
        }
        lv.verify_balanced().unwrap();
    }

    #[test]
    fn six_cycle_vertex_links() {
        // (2,1,2): the complex is a 6-cycle; every vertex link is two
        // vertices of weight 1/2 and no edges.
        let x = tiny();
        assert_eq!(x.face_count(0).unwrap(), 6);
        assert_eq!(x.face_count(1).unwrap(), 6);
        for v in x.faces(0).unwrap() {
            let lv = x.link(v).unwrap();
            assert_eq!(lv.dim(), 0);
            assert_eq!(lv.faces(0).unwrap().len(), 2);
            for w in lv.weights(0).unwrap() {
                assert_eq!(*w, Weight::new(1, 2));
            }
            lv.verify_balanced().unwrap();
        }
    }

    #[test]
    fn vertex_links_are_balanced_and_uniform() {
        // (2,1,3): every vertex link is an 8-cycle with edge weights 1/8.
        let x = small();
        assert_eq!(x.face_count(0).unwrap(), 63);
        assert_eq!(x.face_count(1).unwrap(), 252);
        assert_eq!(x.face_count(2).unwrap(), 168);
        for (base, lv) in x.links_at_level(0).unwrap() {
            assert_eq!(lv.dim(), 1);
            assert_eq!(lv.faces(0).unwrap().len(), 8, "link of {base}");
            assert_eq!(lv.faces(1).unwrap().len(), 8);
            for w in lv.weights(1).unwrap() {
                assert_eq!(*w, Weight::new(1, 8));
            }
            lv.verify_balanced().unwrap();
            let g = lv.skeleton_graph().unwrap();
            assert!(g.is_connected().unwrap());
            assert_eq!(g.regular_degree(), Some(2)); // an 8-cycle
            assert_eq!(g.bipartition().map(|s| s.len()), Some(8));
        }
    }

    #[test]
    fn links_at_level_matches_individual_links() {
        let x = small();
        let all = x.links_at_level(0).unwrap();
        for (base, lv) in all.iter().take(5) {
            let direct = x.link(base).unwrap();
            assert_eq!(lv.dim(), direct.dim());
            for l in 0..=lv.dim() {
                assert_eq!(lv.faces(l).unwrap(), direct.faces(l).unwrap());
                assert_eq!(lv.weights(l).unwrap(), direct.weights(l).unwrap());
            }
        }
        // edge links at the top: single-level views over the third type
        for (base, lv) in x.links_at_level(1).unwrap().iter().take(5) {
            assert_eq!(lv.dim(), 0);
            assert_eq!(lv.faces(0).unwrap().len(), 2, "link of {base}");
            lv.verify_balanced().unwrap();
        }
    }

    #[test]
    fn link_of_missing_face_fails() {
        let x = tiny();
        let bogus = Face::new(&[(1, 0), (2, 999)]).unwrap();
        assert!(matches!(
            x.link(&bogus),
            Err(ComplexError::FaceNotFound { .. })
        ));
    }

    #[test]
    fn top_face_link_is_empty() {
        let x = small();
        let top = &x.faces(2).unwrap()[0];
        let lv = x.link(top).unwrap();
        assert_eq!(lv.dim(), -1);
        assert!(matches!(
            lv.skeleton_graph(),
            Err(ComplexError::EmptyLink { .. })
        ));
    }

    #[test]
    fn local_link_agrees_with_complex_link() {
        // The link of the identity-coset vertex of type 3, computed from
        // the complex, must match the group-theoretic local link on types
        // (1, 2) vertex-for-vertex and edge-for-edge.
        let x = small();
        let local = local_link(2, 1, 3, 1).unwrap();
        assert_eq!(local.types(), (1, 2));

        // the identity's coset of K_3 (reps are lex-min, identity included)
        let id = crate::group::RingMatrix::identity(2, 1, 3).unwrap();
        let c3 = x.table(3).coset_of(&id).unwrap();
        let lv = x.link(&Face::vertex(3, c3)).unwrap();
        let lg = lv.skeleton_graph().unwrap();
        let n1 = local.left_count();

        // map X-link vertices to local cosets by sweeping H = K_S once
        let (t1, t2) = local.side_tables();
        let mut phi: HashMap<(u32, u32), u32> = HashMap::new();
        for h in local.ambient().elements() {
            let x1 = x.table(1).coset_of(h).unwrap();
            let x2 = x.table(2).coset_of(h).unwrap();
            let l1 = t1.coset_of(h).unwrap();
            let l2 = t2.coset_of(h).unwrap() + n1 as u32;
            // consistency: the same X-vertex never maps to two local ids
            assert_eq!(*phi.entry((1, x1)).or_insert(l1), l1);
            assert_eq!(*phi.entry((2, x2)).or_insert(l2), l2);
        }
        // the map covers exactly the link's vertex set, bijectively
        assert_eq!(phi.len(), lg.n());
        assert_eq!(phi.len(), local.graph().n());
        let mut image: Vec<u32> = phi.values().copied().collect();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image.len(), local.graph().n());

        // edges transported through phi coincide (uniform weights on both)
        let link_vertices = lv.faces(0).unwrap();
        let mut transported: Vec<(u32, u32)> = lv
            .faces(1)
            .unwrap()
            .iter()
            .map(|e| {
                let m = e.members();
                let a = phi[&m[0]];
                let b = phi[&m[1]];
                (a.min(b), a.max(b))
            })
            .collect();
        transported.sort_unstable();
        let local_edges: Vec<(u32, u32)> = local
            .graph()
            .edges()
            .iter()
            .map(|&(u, v, _)| (u, v))
            .collect();
        assert_eq!(transported, local_edges);
        assert_eq!(link_vertices.len(), local.graph().n());
        // weights: both uniform at 1/|H|
        let w = Weight::new(1, local.ambient().order() as i128);
        assert!(local.graph().edges().iter().all(|&(_, _, ew)| ew == w));
        assert!(lv.weights(1).unwrap().iter().all(|ew| *ew == w));
    }

    #[test]
    fn nonconsecutive_pair_gives_complete_bipartite() {
        // d = 4, types {1,3}: the two elementary families commute, so H is
        // their direct product and every coset pair is hit — the local link
        // is K_{4,4} (sides of size p^s = 4), all 16 edges of weight 1/16.
        let local = local_link_pair(2, 2, 4, 1, 3, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(local.ambient().order(), 16);
        let g = local.graph();
        assert_eq!(g.n(), 8);
        assert_eq!(local.left_count(), 4);
        assert_eq!(g.edge_count(), 16);
        let w = Weight::new(1, 16);
        assert!(g.edges().iter().all(|&(_, _, ew)| ew == w));
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn consecutive_pair_is_not_complete() {
        // d = 4, types {1,2}: the families interact (Heisenberg-like H of
        // order 64), sides have 16 cosets each, and only 64 of the 256
        // possible pairs appear.
        let local = local_link_pair(2, 2, 4, 1, 2, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(local.ambient().order(), 64);
        let g = local.graph();
        assert_eq!(g.n(), 32);
        assert_eq!(g.edge_count(), 64);
        assert!(g.is_connected().unwrap());
    }

    #[test]
    fn local_link_rejects_bad_types() {
        assert!(local_link_pair(2, 1, 3, 1, 1, DEFAULT_CLOSURE_CAP).is_err());
        assert!(local_link_pair(2, 1, 3, 0, 2, DEFAULT_CLOSURE_CAP).is_err());
        assert!(local_link_pair(2, 1, 3, 1, 4, DEFAULT_CLOSURE_CAP).is_err());
    }
}
