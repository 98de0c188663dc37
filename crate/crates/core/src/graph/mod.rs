//! Simple undirected graphs, community labels and hop distances.

mod io;

pub use io::{load_graph, save_graph};

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// An undirected edge stored as `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

/// Hop distance; `None` marks an unreachable vertex.
pub type Distance = Option<u32>;

/// Immutable simple undirected graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    /// Edges may be given in either orientation.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut canonical = Vec::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_canonical(vertex_count, canonical))
    }

    /// `edges` must already be sorted, deduplicated and oriented `u < v`.
    pub(crate) fn from_canonical(vertex_count: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { adjacency, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, sorted lexicographically.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }
}

/// Breadth-first hop distances from `source`.
///
/// # Panics
/// If `source` is not a vertex of `g`.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<Distance> {
    assert!(source < g.vertex_count(), "source {source} out of range");
    let mut dist = vec![None; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u].map(|d| d + 1);
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Lazily memoized BFS rows for one graph. Safe to share between threads.
pub struct DistanceCache<'g> {
    graph: &'g Graph,
    rows: Vec<OnceLock<Vec<Distance>>>,
}

impl<'g> DistanceCache<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let rows = (0..graph.vertex_count()).map(|_| OnceLock::new()).collect();
        DistanceCache { graph, rows }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Distances from `v` to every vertex.
    pub fn row(&self, v: usize) -> &[Distance] {
        self.rows[v].get_or_init(|| bfs_distances(self.graph, v))
    }

    pub fn distance(&self, u: usize, v: usize) -> Distance {
        self.row(u)[v]
    }
}

/// Community label per vertex, with labels dense in `0..community_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityPartition {
    labels: Vec<usize>,
    community_count: usize,
}

impl CommunityPartition {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let community_count = labels.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; community_count];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(empty) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "community {empty} is empty"
            )));
        }
        Ok(CommunityPartition {
            labels,
            community_count,
        })
    }

    /// Every vertex in community 0.
    pub fn single(vertex_count: usize) -> Self {
        CommunityPartition {
            labels: vec![0; vertex_count],
            community_count: usize::from(vertex_count > 0),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertices of community `c` in increasing order.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&v| self.labels[v] == c)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Whether an edge joins two communities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Intra,
    Inter,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Intra => "intra",
            EdgeKind::Inter => "inter",
        }
    }
}

/// The graph's edges split by community membership.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeClass {
    pub intra: Vec<Edge>,
    pub inter: Vec<Edge>,
}

pub fn classify_edges(g: &Graph, p: &CommunityPartition) -> Result<EdgeClass> {
    if p.len() != g.vertex_count() {
        return Err(Error::Dimension(format!(
            "{} labels for {} vertices",
            p.len(),
            g.vertex_count()
        )));
    }
    let mut class = EdgeClass::default();
    for &(u, v) in g.edges() {
        if p.label(u) == p.label(v) {
            class.intra.push((u, v));
        } else {
            class.inter.push((u, v));
        }
    }
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn bfs_on_path() {
        assert_eq!(bfs_distances(&path3(), 0), vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn bfs_marks_unreachable() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(bfs_distances(&g, 0), vec![Some(0), Some(1), None, None]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::new(2, [(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(2, [(0, 1), (1, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::new(4, [(3, 0), (2, 0), (1, 0)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert!(g.has_edge(3, 0) && g.has_edge(0, 3));
    }

    #[test]
    fn partition_rejects_gaps() {
        assert!(CommunityPartition::new(vec![0, 2]).is_err());
        let p = CommunityPartition::new(vec![1, 0, 1]).unwrap();
        assert_eq!(p.community_count(), 2);
        assert_eq!(p.members(1), vec![0, 2]);
        assert_eq!(p.sizes(), vec![1, 2]);
    }

    #[test]
    fn single_community_has_no_inter_edges() {
        let g = path3();
        let class = classify_edges(&g, &CommunityPartition::single(3)).unwrap();
        assert!(class.inter.is_empty());
        assert_eq!(class.intra.len(), 2);
    }

    #[test]
    fn classify_rejects_length_mismatch() {
        let err = classify_edges(&path3(), &CommunityPartition::single(2)).unwrap_err();
        assert_eq!(err.code(), "DIMENSION");
    }

    #[test]
    fn cache_matches_bfs() {
        let g = path3();
        let cache = DistanceCache::new(&g);
        assert_eq!(cache.row(2), bfs_distances(&g, 2).as_slice());
        assert_eq!(cache.distance(0, 2), Some(2));
    }
}
