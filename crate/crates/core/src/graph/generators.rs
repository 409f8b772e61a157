//! Named example graphs and seeded random graphs.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph, VertexSet};
use crate::error::{Error, Result};

/// Accumulates cliques glued along shared vertices.
#[derive(Default)]
struct CliqueGluer {
    n: usize,
    edges: BTreeSet<Edge>,
    parts: Vec<VertexSet>,
}

impl CliqueGluer {
    fn fresh(&mut self, k: usize) -> Vec<usize> {
        let out = (self.n..self.n + k).collect();
        self.n += k;
        out
    }

    fn clique(&mut self, vertices: &[usize]) -> usize {
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                self.edges.insert(Edge::new(a, b));
            }
        }
        self.parts.push(VertexSet::new(vertices.iter().copied()));
        self.parts.len() - 1
    }

    fn finish(self) -> (Graph, Vec<VertexSet>) {
        (Graph::from_edges(self.n, self.edges), self.parts)
    }
}

pub fn complete(n: usize) -> Graph {
    let mut g = CliqueGluer::default();
    let vs = g.fresh(n);
    g.clique(&vs);
    g.finish().0
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| Edge::new(i - 1, i)))
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|i| Edge::new(i, (i + 1) % n)))
}

/// Two K5s on `{0..4}` and `{3..7}` sharing the vertices 3 and 4. With
/// `hinge = false` the shared edge (3,4) is deleted.
pub fn double_banana(hinge: bool) -> Graph {
    let mut g = CliqueGluer::default();
    g.fresh(8);
    g.clique(&[0, 1, 2, 3, 4]);
    g.clique(&[3, 4, 5, 6, 7]);
    let (graph, _) = g.finish();
    if hinge {
        graph
    } else {
        let hinge_edge = Edge::new(3, 4);
        graph.with_edges(graph.edges().iter().copied().filter(|&e| e != hinge_edge))
    }
}

/// Hingeless double banana plus the bar (2,5) joining a degree-4 vertex of
/// each banana.
pub fn double_banana_bar() -> Graph {
    double_banana(false).with_edge(Edge::new(2, 5))
}

/// `n` K5s sharing the vertex pair {3,4}, with the edge (3,4) removed.
/// Banana 0 is `{0..4}`; banana `i ≥ 1` adds vertices `5+3(i-1)..8+3(i-1)`,
/// so `n_banana(2)` coincides with `double_banana(false)`.
pub fn n_banana(n: usize) -> Result<Graph> {
    n_banana_with_cover(n).map(|(g, _)| g)
}

/// [`n_banana`] together with its banana vertex sets.
pub fn n_banana_with_cover(n: usize) -> Result<(Graph, Vec<VertexSet>)> {
    if n == 0 {
        return Err(Error::input("n-banana needs at least one banana"));
    }
    let mut g = CliqueGluer::default();
    let first = g.fresh(5);
    g.clique(&first);
    for _ in 1..n {
        let own = g.fresh(3);
        g.clique(&[3, 4, own[0], own[1], own[2]]);
    }
    let (graph, parts) = g.finish();
    let hinge = Edge::new(3, 4);
    let graph = graph.with_edges(graph.edges().iter().copied().filter(|&e| e != hinge));
    Ok((graph, parts))
}

/// Closed chain of `n` K5s in which neighbours share an edge and each K5's two
/// shared edges are vertex-disjoint.
pub fn k5_ring(n: usize) -> Result<Graph> {
    k5_ring_with_cover(n).map(|(g, _)| g)
}

/// [`k5_ring`] with its K5 vertex sets. K5 number `j` is
/// `{3(j-1), 3(j-1)+1, 3j, 3j+1, 3j+2}` (indices mod `3n`), so it shares the
/// edge `(3j, 3j+1)` with K5 `j+1`.
pub fn k5_ring_with_cover(n: usize) -> Result<(Graph, Vec<VertexSet>)> {
    if n < 3 {
        return Err(Error::input("a K5 ring needs at least 3 K5s"));
    }
    let mut g = CliqueGluer::default();
    g.fresh(3 * n);
    for j in 0..n {
        let p = (j + n - 1) % n;
        g.clique(&[3 * p, 3 * p + 1, 3 * j, 3 * j + 1, 3 * j + 2]);
    }
    Ok(g.finish())
}

/// K5 with its edges in K5s glued around five rings of seven.
#[derive(Clone, Debug)]
pub struct SmrCounter {
    pub graph: Graph,
    /// All 31 K5 vertex sets; index 0 is the central K5.
    pub cover: Vec<VertexSet>,
    /// Per ring, the cover indices in ring order, starting with the centre.
    pub rings: Vec<Vec<usize>>,
    /// Every shared edge with the two cover indices that contain it.
    pub shared: Vec<(Edge, usize, usize)>,
    /// For every non-central K5, the unshared edge omitted from it in the
    /// small maximal Maxwell-independent set.
    pub omitted: Vec<Option<Edge>>,
}

/// The five-ring example built around a central K5 `T = {0..4}`.
///
/// Gluing: T's ten edges are split into the five vertex-disjoint pairs
/// `{(i,i+1), (i+2,i+4)}` (mod 5), `i = 0..4`. Ring `i` is the closed chain
/// `T, A1, .., A6` where `A1` shares `(i,i+1)` with T, `A6` shares
/// `(i+2,i+4)` with T, and `Aj = s(j-1) ∪ s(j) ∪ {x_j}` for fresh vertex
/// pairs `s(1)..s(5)` and fresh apexes `x_1..x_6`. Each ring adds 16 vertices
/// and 53 edges.
pub fn smr_counter() -> SmrCounter {
    let mut g = CliqueGluer::default();
    let t = g.fresh(5);
    let t_idx = g.clique(&t);
    let mut rings = Vec::new();
    let mut shared = Vec::new();
    let mut omitted = vec![None];
    for i in 0..5 {
        let first = Edge::new(i, (i + 1) % 5);
        let last = Edge::new((i + 2) % 5, (i + 4) % 5);
        // s[0] and s[6] are T's edges; s[1..=5] are fresh pairs.
        let mut s = vec![first];
        for _ in 1..6 {
            let p = g.fresh(2);
            s.push(Edge::new(p[0], p[1]));
        }
        s.push(last);
        let mut ring = vec![t_idx];
        for j in 1..=6 {
            let apex = g.fresh(1)[0];
            let (a, b) = (s[j - 1], s[j]);
            let idx = g.clique(&[a.u(), a.v(), b.u(), b.v(), apex]);
            ring.push(idx);
            omitted.push(Some(Edge::new(apex, b.u())));
        }
        for j in 0..7 {
            let (p, q) = (ring[j], ring[(j + 1) % 7]);
            shared.push((s[j], p, q));
        }
        rings.push(ring);
    }
    let (graph, cover) = g.finish();
    SmrCounter {
        graph,
        cover,
        rings,
        shared,
        omitted,
    }
}

impl SmrCounter {
    /// Nine edges in every non-central K5 (dropping an unshared edge) and all
    /// of T, except that T's edge shared with ring 0's first K5 is dropped and
    /// that K5's omitted edge is restored.
    pub fn small_maximal_set(&self) -> Vec<Edge> {
        let dropped: Vec<Edge> = self.omitted.iter().flatten().copied().collect();
        let (e, _, neighbour) = self.shared[0];
        let f = self.omitted[neighbour].expect("non-central part");
        self.graph
            .edges()
            .iter()
            .copied()
            .filter(|&x| x != e && (x == f || !dropped.contains(&x)))
            .collect()
    }
}

/// Two K5s sharing the single vertex 4.
pub fn two_k5_sharing_vertex() -> Graph {
    let mut g = CliqueGluer::default();
    g.fresh(9);
    g.clique(&[0, 1, 2, 3, 4]);
    g.clique(&[4, 5, 6, 7, 8]);
    g.finish().0
}

/// Chain of three K5s, consecutive ones sharing an edge.
pub fn three_k5_chain() -> Graph {
    let mut g = CliqueGluer::default();
    g.fresh(11);
    g.clique(&[0, 1, 2, 3, 4]);
    g.clique(&[3, 4, 5, 6, 7]);
    g.clique(&[6, 7, 8, 9, 10]);
    g.finish().0
}

/// Uniform simple graph on `n` vertices with exactly `m` edges.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Err(Error::input(format!(
            "{m} edges do not fit on {n} vertices (max {total})"
        )));
    }
    let pairs: Vec<Edge> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| Edge::new(a, b)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = sample(&mut rng, total, m);
    Ok(Graph::from_edges(n, picked.into_iter().map(|i| pairs[i])))
}
