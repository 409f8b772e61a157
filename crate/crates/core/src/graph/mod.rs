//! Undirected simple graphs on dense vertex ids, with edge and vertex subset
//! overlays.

mod generators;
mod io;

pub use generators::{
    complete, cycle, double_banana, double_banana_bar, k5_ring, k5_ring_with_cover, n_banana,
    n_banana_with_cover, path, random_graph, smr_counter, three_k5_chain, two_k5_sharing_vertex,
    SmrCounter,
};
pub use io::{read_cover, read_graph, write_cover, write_dot, write_graph};

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unordered vertex pair stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(usize, usize);

impl Edge {
    /// Panics on a self-loop; use [`Edge::try_new`] for untrusted input.
    pub fn new(a: usize, b: usize) -> Self {
        Self::try_new(a, b).expect("self-loop")
    }

    pub fn try_new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(Error::input(format!("self-loop at vertex {a}"))),
        }
    }

    pub fn u(self) -> usize {
        self.0
    }

    pub fn v(self) -> usize {
        self.1
    }

    pub fn touches(self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.touches(other.0) || self.touches(other.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Sorted set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.contains(e.u()) && self.contains(e.v())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.len() <= other.len() && self.0.iter().all(|&v| other.contains(v))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(
            self.0
                .iter()
                .copied()
                .filter(|&v| other.contains(v))
                .collect(),
        )
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Immutable undirected simple graph on vertices `0..n`.
///
/// Edges are kept in lexicographic order, which fixes the canonical edge index
/// used by every overlay and by the rigidity matrix row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

/// Result of restricting a graph to a vertex subset: the relabelled graph and
/// the map from new ids back to the parent's ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Induced {
    pub graph: Graph,
    pub to_parent: Vec<usize>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::input(format!(
                    "edge ({a},{b}) has an endpoint outside 0..{n}"
                )));
            }
            edges.push(Edge::try_new(a, b)?);
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate edge {}", w[0])));
        }
        Ok(Self::from_sorted(n, edges))
    }

    /// Builds a graph from edges already known to be valid.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        assert!(
            edges.iter().all(|e| e.v() < n),
            "edge endpoint out of range"
        );
        Self::from_sorted(n, edges)
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Edge {
        self.edges[index]
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Vertices with at least one incident edge.
    pub fn support(&self) -> VertexSet {
        VertexSet((0..self.n).filter(|&v| !self.adj[v].is_empty()).collect())
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet((0..self.n).collect())
    }

    /// Number of edges with both endpoints in `x`.
    pub fn induced_edge_count(&self, x: &VertexSet) -> usize {
        x.iter()
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| w > v && x.contains(w))
                    .count()
            })
            .sum()
    }

    /// Edges with both endpoints in `x`, in canonical order.
    pub fn induced_edges(&self, x: &VertexSet) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|&e| x.contains_edge(e))
            .collect()
    }

    /// True when every pair of vertices in `x` is adjacent.
    pub fn is_clique(&self, x: &VertexSet) -> bool {
        let k = x.len();
        self.induced_edge_count(x) == k * k.saturating_sub(1) / 2
    }

    /// Restriction to `x`, relabelled to `0..|x|` in increasing parent order.
    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<Induced> {
        if let Some(&bad) = x.as_slice().iter().find(|&&v| v >= self.n) {
            return Err(Error::input(format!(
                "vertex {bad} is outside 0..{}",
                self.n
            )));
        }
        let to_parent = x.as_slice().to_vec();
        let local = |v: usize| x.as_slice().binary_search(&v).expect("member");
        let edges = self
            .induced_edges(x)
            .into_iter()
            .map(|e| Edge(local(e.u()), local(e.v())));
        Ok(Induced {
            graph: Graph::from_edges(to_parent.len(), edges),
            to_parent,
        })
    }

    /// Same vertex set, restricted to the given edges (which need not be
    /// edges of `self`).
    pub fn with_edges(&self, edges: impl IntoIterator<Item = Edge>) -> Graph {
        Graph::from_edges(self.n, edges)
    }

    /// Copy of the graph with one extra edge.
    pub fn with_edge(&self, e: Edge) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied().chain(std::iter::once(e)))
    }
}

/// A subset of a parent graph's edges, stored as a bitset over the parent's
/// canonical edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSubset<'g> {
    graph: &'g Graph,
    members: FixedBitSet,
}

impl<'g> EdgeSubset<'g> {
    pub fn empty(graph: &'g Graph) -> Self {
        EdgeSubset {
            graph,
            members: FixedBitSet::with_capacity(graph.edge_count()),
        }
    }

    pub fn full(graph: &'g Graph) -> Self {
        let mut s = Self::empty(graph);
        s.members.insert_range(..);
        s
    }

    pub fn from_indices(graph: &'g Graph, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(graph);
        for i in indices {
            s.members.insert(i);
        }
        s
    }

    /// Fails if some edge is not an edge of the parent.
    pub fn from_edges(graph: &'g Graph, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut s = Self::empty(graph);
        for e in edges {
            let i = graph
                .edge_index(e)
                .ok_or_else(|| Error::input(format!("{e} is not an edge of the parent graph")))?;
            s.members.insert(i);
        }
        Ok(s)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.graph
            .edge_index(e)
            .is_some_and(|i| self.members.contains(i))
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn insert_index(&mut self, i: usize) {
        self.members.insert(i);
    }

    pub fn remove_index(&mut self, i: usize) {
        self.members.set(i, false);
    }

    pub fn insert(&mut self, e: Edge) -> Result<()> {
        let i = self
            .graph
            .edge_index(e)
            .ok_or_else(|| Error::input(format!("{e} is not an edge of the parent graph")))?;
        self.members.insert(i);
        Ok(())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.members.ones().map(|i| self.graph.edge(i))
    }

    pub fn to_vec(&self) -> Vec<Edge> {
        self.iter().collect()
    }

    /// Vertices touched by at least one member edge.
    pub fn support(&self) -> VertexSet {
        VertexSet::new(self.iter().flat_map(|e| [e.u(), e.v()]))
    }

    /// The members as a graph on the parent's full vertex range.
    pub fn to_graph(&self) -> Graph {
        Graph::from_sorted_unchecked(self.graph.n, self.to_vec())
    }

    /// Members with both endpoints in `x`.
    pub fn restricted_to(&self, x: &VertexSet) -> EdgeSubset<'g> {
        let mut s = Self::empty(self.graph);
        for i in self.members.ones() {
            if x.contains_edge(self.graph.edge(i)) {
                s.members.insert(i);
            }
        }
        s
    }

    pub fn union(&self, other: &EdgeSubset<'_>) -> EdgeSubset<'g> {
        let mut s = self.clone();
        s.members.union_with(&other.members);
        s
    }

    pub fn difference(&self, other: &EdgeSubset<'_>) -> EdgeSubset<'g> {
        let mut s = self.clone();
        s.members.difference_with(&other.members);
        s
    }

    pub fn is_subset(&self, other: &EdgeSubset<'_>) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl Graph {
    fn from_sorted_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self::from_sorted(n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn edges_are_lexicographic() {
        let g = Graph::new(4, [(2, 3), (1, 0), (3, 0)]).unwrap();
        assert_eq!(
            g.edges(),
            &[Edge::new(0, 1), Edge::new(0, 3), Edge::new(2, 3)]
        );
        assert_eq!(g.edge_index(Edge::new(3, 0)), Some(1));
    }

    #[test]
    fn induced_subgraph_of_clique_is_triangle() {
        let k5 = complete(5);
        let tri = k5.induced_subgraph(&VertexSet::new([0, 1, 2])).unwrap();
        assert_eq!(tri.graph.n(), 3);
        assert_eq!(tri.graph.edge_count(), 3);
        assert_eq!(tri.to_parent, vec![0, 1, 2]);
    }

    #[test]
    fn induced_subgraph_empty_and_full() {
        let g = double_banana(true);
        let empty = g.induced_subgraph(&VertexSet::default()).unwrap();
        assert_eq!(empty.graph.n(), 0);
        assert_eq!(empty.graph.edge_count(), 0);
        let full = g.induced_subgraph(&g.all_vertices()).unwrap();
        assert_eq!(full.graph, g);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = path(5);
        let sub = g.induced_subgraph(&VertexSet::new([1, 2, 4])).unwrap();
        assert_eq!(sub.graph.edges(), &[Edge::new(0, 1)]);
        assert_eq!(sub.to_parent, vec![1, 2, 4]);
        assert!(g.induced_subgraph(&VertexSet::new([7])).is_err());
    }

    #[test]
    fn edge_subset_support_and_restriction() {
        let g = double_banana(false);
        let all = EdgeSubset::full(&g);
        assert_eq!(all.len(), 18);
        let left = all.restricted_to(&VertexSet::new(0..5));
        assert_eq!(left.len(), 9);
        assert_eq!(left.support(), VertexSet::new(0..5));
        let m = left.to_graph();
        assert_eq!(m.n(), 8);
        assert_eq!(m.edge_count(), 9);
    }
}
