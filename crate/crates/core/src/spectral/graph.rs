//! Weighted undirected graphs with exact rational edge weights.
//!
//! The weight of a vertex is the sum of its incident edge weights; the
//! normalized adjacency operators downstream divide by it, so isolated
//! vertices are legal to store but rejected at the spectral boundary.

use std::collections::VecDeque;
use std::io::{self, BufRead, Write};

use num_traits::Zero;

use crate::error::SpectralError;
use crate::Weight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(u32, u32, Weight)>,
    vertex_weight: Vec<Weight>,
    adj: Vec<Vec<(u32, Weight)>>,
    labels: Option<Vec<String>>,
}

impl WeightedGraph {
    /// Build from an edge list. Endpoints are normalized to u < v; self
    /// loops, duplicates, out-of-range endpoints and non-positive weights
    /// are all rejected.
    pub fn new(n: usize, edges: Vec<(u32, u32, Weight)>) -> Result<Self, SpectralError> {
        let mut es: Vec<(u32, u32, Weight)> = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(SpectralError::BadEdge { u, v, n });
            }
            if u == v {
                return Err(SpectralError::SelfLoop { u });
            }
            if w <= Weight::zero() {
                return Err(SpectralError::NonPositiveWeight { u, v });
            }
            es.push(if u < v { (u, v, w) } else { (v, u, w) });
        }
        es.sort_by_key(|&(u, v, _)| (u, v));
        for pair in es.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(SpectralError::DuplicateEdge {
                    u: pair[0].0,
                    v: pair[0].1,
                });
            }
        }
        let mut vertex_weight = vec![Weight::zero(); n];
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &es {
            vertex_weight[u as usize] += w;
            vertex_weight[v as usize] += w;
            adj[u as usize].push((v, w));
            adj[v as usize].push((u, w));
        }
        Ok(WeightedGraph {
            n,
            edges: es,
            vertex_weight,
            adj,
            labels: None,
        })
    }

    /// Same, with weight 1 on every edge.
    pub fn unit(n: usize, edges: &[(u32, u32)]) -> Result<Self, SpectralError> {
        Self::new(
            n,
            edges
                .iter()
                .map(|&(u, v)| (u, v, Weight::new(1, 1)))
                .collect(),
        )
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, SpectralError> {
        if labels.len() != self.n {
            return Err(SpectralError::Parse {
                reason: format!("{} labels for {} vertices", labels.len(), self.n),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32, Weight)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn neighbors(&self, u: u32) -> &[(u32, Weight)] {
        &self.adj[u as usize]
    }

    pub fn vertex_weight(&self, u: u32) -> Weight {
        self.vertex_weight[u as usize]
    }

    /// Sum of all vertex weights (twice the total edge weight); the
    /// stationary distribution divides by this.
    pub fn total_weight(&self) -> Weight {
        self.vertex_weight
            .iter()
            .fold(Weight::zero(), |acc, w| acc + w)
    }

    /// Uniform edge weights make a combinatorial degree check meaningful:
    /// returns the common degree if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg0 = self.adj.first()?.len();
        self.adj.iter().all(|a| a.len() == deg0).then_some(deg0)
    }

    /// BFS connectivity. The empty graph (no vertices) is neither
    /// connected nor disconnected — it is an error the caller must face.
    pub fn is_connected(&self) -> Result<bool, SpectralError> {
        if self.n == 0 {
            return Err(SpectralError::EmptyGraph);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(count == self.n)
    }

    /// Two-color the graph if it is bipartite: returns a side marker per
    /// vertex, or None when some component has an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut queue = VecDeque::from([start as u32]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in self.neighbors(u) {
                    if side[v as usize] == u8::MAX {
                        side[v as usize] = 1 - side[u as usize];
                        queue.push_back(v);
                    } else if side[v as usize] == side[u as usize] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    /// Serialize as an edge list with a one-line header. Weights are exact
    /// rationals; `weighted=false` is accepted on read for plain lists.
    pub fn write_edge_list(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "vertices={} weighted=true", self.n)?;
        for &(u, v, wt) in &self.edges {
            writeln!(w, "{u} {v} {wt}")?;
        }
        Ok(())
    }

    pub fn read_edge_list(r: impl BufRead) -> Result<Self, SpectralError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| SpectralError::Parse {
                reason: "missing header".to_string(),
            })??;
        let (n, weighted) = parse_header(&header)?;
        let mut edges = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let u: u32 = parse_field(parts.next(), line)?;
            let v: u32 = parse_field(parts.next(), line)?;
            let w = if weighted {
                parse_weight(parts.next().ok_or_else(|| SpectralError::Parse {
                    reason: format!("missing weight in `{line}`"),
                })?)?
            } else {
                Weight::new(1, 1)
            };
            if parts.next().is_some() {
                return Err(SpectralError::Parse {
                    reason: format!("trailing fields in `{line}`"),
                });
            }
            edges.push((u, v, w));
        }
        Self::new(n, edges)
    }
}

fn parse_header(header: &str) -> Result<(usize, bool), SpectralError> {
    let mut n = None;
    let mut weighted = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("vertices=") {
            n = v.parse().ok();
        } else if let Some(v) = field.strip_prefix("weighted=") {
            weighted = v.parse().ok();
        }
    }
    match (n, weighted) {
        (Some(n), Some(w)) => Ok((n, w)),
        _ => Err(SpectralError::Parse {
            reason: format!("bad header `{header}`"),
        }),
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: &str) -> Result<T, SpectralError> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| SpectralError::Parse {
            reason: format!("bad edge line `{line}`"),
        })
}

fn parse_weight(text: &str) -> Result<Weight, SpectralError> {
    let bad = || SpectralError::Parse {
        reason: format!("bad weight `{text}`"),
    };
    match text.split_once('/') {
        None => {
            let n: i128 = text.parse().map_err(|_| bad())?;
            Ok(Weight::new(n, 1))
        }
        Some((a, b)) => {
            let n: i128 = a.parse().map_err(|_| bad())?;
            let d: i128 = b.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Weight::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i128, d: i128) -> Weight {
        Weight::new(n, d)
    }

    #[test]
    fn construction_normalizes_and_validates() {
        let g = WeightedGraph::new(3, vec![(2, 0, w(1, 2)), (0, 1, w(1, 3))]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, w(1, 3)), (0, 2, w(1, 2))]);
        assert_eq!(g.vertex_weight(0), w(5, 6));
        assert_eq!(g.vertex_weight(1), w(1, 3));
        assert_eq!(g.total_weight(), w(5, 6) + w(1, 3) + w(1, 2));

        assert!(matches!(
            WeightedGraph::new(2, vec![(0, 2, w(1, 1))]),
            Err(SpectralError::BadEdge { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(2, vec![(1, 1, w(1, 1))]),
            Err(SpectralError::SelfLoop { u: 1 })
        ));
        assert!(matches!(
            WeightedGraph::new(2, vec![(0, 1, w(1, 1)), (1, 0, w(1, 2))]),
            Err(SpectralError::DuplicateEdge { u: 0, v: 1 })
        ));
        assert!(matches!(
            WeightedGraph::new(2, vec![(0, 1, w(0, 1))]),
            Err(SpectralError::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn connectivity_cases() {
        let path = WeightedGraph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(path.is_connected().unwrap());
        let split = WeightedGraph::unit(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!split.is_connected().unwrap());
        let isolated = WeightedGraph::unit(2, &[]).unwrap();
        assert!(!isolated.is_connected().unwrap());
        let empty = WeightedGraph::unit(0, &[]).unwrap();
        assert!(matches!(
            empty.is_connected(),
            Err(SpectralError::EmptyGraph)
        ));
    }

    #[test]
    fn bipartition_detection() {
        let even = WeightedGraph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let side = even.bipartition().unwrap();
        assert_eq!(side[0], side[2]);
        assert_ne!(side[0], side[1]);
        let odd = WeightedGraph::unit(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(odd.bipartition().is_none());
    }

    #[test]
    fn regular_degree_detection() {
        let cycle = WeightedGraph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(cycle.regular_degree(), Some(2));
        let path = WeightedGraph::unit(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.regular_degree(), None);
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = WeightedGraph::new(3, vec![(0, 1, w(1, 3)), (1, 2, w(5, 1))]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("vertices=3 weighted=true\n"));
        assert!(text.contains("0 1 1/3\n"));
        assert!(text.contains("1 2 5\n"));
        let back = WeightedGraph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(g.edges(), back.edges());
        assert_eq!(g.n(), back.n());
    }

    #[test]
    fn unweighted_read() {
        let text = "vertices=3 weighted=false\n0 1\n1 2\n";
        let g = WeightedGraph::read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g.edges(), &[(0, 1, w(1, 1)), (1, 2, w(1, 1))]);
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(WeightedGraph::read_edge_list("junk\n".as_bytes()).is_err());
        assert!(
            WeightedGraph::read_edge_list("vertices=2 weighted=true\n0 1\n".as_bytes()).is_err()
        );
        assert!(WeightedGraph::read_edge_list(
            "vertices=2 weighted=true\n0 1 1/0\n".as_bytes()
        )
        .is_err());
        assert!(WeightedGraph::read_edge_list(
            "vertices=2 weighted=false\n0 1 9\n".as_bytes()
        )
        .is_err());
    }
}
