//! Covers by vertex sets, their hinge bookkeeping, inclusion-exclusion counts
//! and component graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{Edge, Graph, VertexSet};
use crate::rank::RankOracle;
use crate::sparsity::{self, tight_size};

/// Pairwise incomparable vertex sets, each with at least two vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cover {
    parts: Vec<VertexSet>,
}

impl Cover {
    pub fn new(g: &Graph, parts: Vec<VertexSet>) -> Result<Self> {
        for (i, p) in parts.iter().enumerate() {
            if p.len() < 2 {
                return Err(Error::input(format!(
                    "cover part {i} has fewer than two vertices"
                )));
            }
            if let Some(&bad) = p.as_slice().iter().find(|&&v| v >= g.n()) {
                return Err(Error::input(format!(
                    "cover part {i} names vertex {bad} outside the graph"
                )));
            }
            for (j, q) in parts.iter().enumerate() {
                if i != j && p.is_subset(q) {
                    return Err(Error::input(format!(
                        "cover part {i} is contained in part {j}"
                    )));
                }
            }
        }
        Ok(Cover { parts })
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Every edge of `g` lies inside some part.
    pub fn covers_all_edges(&self, g: &Graph) -> bool {
        g.edges()
            .iter()
            .all(|&e| self.parts.iter().any(|p| p.contains_edge(e)))
    }
}

/// Keeps the inclusion-maximal sets, sorted and deduplicated.
fn maximal_sets(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<VertexSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

fn require_independent(g: &Graph, d: usize) -> Result<()> {
    match sparsity::maxwell_violation(g, d) {
        None => Ok(()),
        Some(v) => Err(Error::Contract(format!(
            "graph is not Maxwell-independent: edge {} has deficiency {} on {}",
            v.edge, v.deficiency.value, v.deficiency.witness
        ))),
    }
}

/// Cliques on at most `d - 1` vertices containing both endpoints of `e`.
fn small_cliques_through(g: &Graph, e: Edge, d: usize) -> Vec<VertexSet> {
    let mut out = vec![VertexSet::new([e.u(), e.v()])];
    let common: Vec<usize> = g
        .neighbors(e.u())
        .iter()
        .copied()
        .filter(|&w| g.has_edge(w, e.v()))
        .collect();
    let mut frontier = vec![vec![e.u(), e.v()]];
    while let Some(c) = frontier.pop() {
        if c.len() + 1 > d.saturating_sub(1) {
            continue;
        }
        let last = *c.last().expect("nonempty");
        for &w in &common {
            let extends = (c.len() == 2 || w > last) && !c.contains(&w);
            if extends && c[2..].iter().all(|&x| g.has_edge(x, w)) {
                let mut next = c.clone();
                next.push(w);
                out.push(VertexSet::new(next.iter().copied()));
                frontier.push(next);
            }
        }
    }
    out
}

fn components_of_edge_unchecked(g: &Graph, e: Edge, d: usize) -> Vec<VertexSet> {
    let mut sets = sparsity::tight_closures(g.n(), g.edges(), e.u(), e.v(), d);
    sets.extend(small_cliques_through(g, e, d));
    maximal_sets(sets)
}

/// Vertex-maximal components of a Maxwell-independent graph containing `e`.
/// Tight sets on at least `d` vertices and cliques on fewer both count; an
/// edge shared by two components lies in both, hence the list.
pub fn components_of_edge(g: &Graph, e: Edge, d: usize) -> Result<Vec<VertexSet>> {
    if !g.has_edge(e.u(), e.v()) {
        return Err(Error::input(format!("{e} is not an edge")));
    }
    require_independent(g, d)?;
    Ok(components_of_edge_unchecked(g, e, d))
}

/// All vertex-maximal components of a Maxwell-independent graph.
pub fn vertex_maximal_components(g: &Graph, d: usize) -> Result<Cover> {
    require_independent(g, d)?;
    let per_edge = exec::map_slice(g.edges(), |&e| components_of_edge_unchecked(g, e, d));
    Ok(Cover {
        parts: maximal_sets(per_edge.into_iter().flatten().collect()),
    })
}

pub const DEFAULT_SCAN_CAP: usize = 12;

fn subset_scan(g: &Graph, d: usize, cap: usize, proper: bool) -> Result<Cover> {
    let n = g.n();
    if n > cap {
        return Err(Error::input(format!(
            "exhaustive component scan is limited to {cap} vertices (graph has {n}); \
             supply a cover file instead"
        )));
    }
    let mut found: Vec<VertexSet> = Vec::new();
    let top = if proper { n.saturating_sub(1) } else { n };
    for k in (2..=top).rev() {
        let mut level: Vec<VertexSet> = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let x = VertexSet::new(idx.iter().copied());
            if !found.iter().any(|f| x.is_subset(f)) {
                level.push(x);
            }
            let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
                break;
            };
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
        }
        let rigid = exec::map_slice(&level, |x| {
            let sub = g.induced_subgraph(x).expect("in range").graph;
            sparsity::is_maxwell_rigid(&sub, d)
        });
        found.extend(
            level
                .into_iter()
                .zip(rigid)
                .filter(|(_, r)| *r)
                .map(|(x, _)| x),
        );
    }
    found.sort();
    Ok(Cover { parts: found })
}

/// Vertex-maximal components of an arbitrary graph by exhaustive scan of
/// vertex subsets, largest first. Refuses graphs with more than `cap` vertices.
pub fn vertex_maximal_components_general(g: &Graph, d: usize, cap: usize) -> Result<Cover> {
    subset_scan(g, d, cap, false)
}

/// Maximal Maxwell-rigid induced subgraphs other than `g` itself.
pub fn proper_vertex_maximal_components(g: &Graph, d: usize, cap: usize) -> Result<Cover> {
    subset_scan(g, d, cap, true)
}

/// A vertex pair shared by several parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HingePair {
    pub pair: Edge,
    /// Number of parts containing both vertices.
    pub multiplicity: usize,
    pub is_edge: bool,
}

/// Pairs `{u,v}` that are the full intersection of two parts.
pub fn hinge_set(g: &Graph, c: &Cover) -> Vec<HingePair> {
    let mut pairs = BTreeSet::new();
    for (i, p) in c.parts.iter().enumerate() {
        for q in &c.parts[i + 1..] {
            let common = p.intersection(q);
            if common.len() == 2 {
                pairs.insert(Edge::new(common.as_slice()[0], common.as_slice()[1]));
            }
        }
    }
    pairs
        .into_iter()
        .map(|pair| HingePair {
            pair,
            multiplicity: c.parts.iter().filter(|p| p.contains_edge(pair)).count(),
            is_edge: g.has_edge(pair.u(), pair.v()),
        })
        .collect()
}

pub fn is_2thin(c: &Cover) -> bool {
    c.parts.iter().enumerate().all(|(i, p)| {
        c.parts[i + 1..]
            .iter()
            .all(|q| p.intersection(q).len() <= 2)
    })
}

pub fn is_strong_2thin(g: &Graph, c: &Cover) -> bool {
    is_2thin(c) && hinge_set(g, c).iter().all(|h| h.is_edge)
}

/// Inclusion-exclusion counts of a cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IeCounts {
    /// Σ rank(G₁(X_i)) − Σ_H (n − 1), hinge pairs added to each part.
    pub ie_rank: i64,
    /// Σ rank(G(X_i)) − Σ (n_e − 1) over hinge pairs that are edges.
    pub ie_rank_plain: i64,
    /// Σ full(|X_i|) − Σ_H (n − 1).
    pub ie_full: i64,
    pub part_ranks: Vec<usize>,
    pub part_ranks_plain: Vec<usize>,
    pub hinges: Vec<HingePair>,
}

fn overlap_correction(hinges: &[HingePair], edges_only: bool) -> i64 {
    hinges
        .iter()
        .filter(|h| !edges_only || h.is_edge)
        .map(|h| h.multiplicity as i64 - 1)
        .sum()
}

/// Both rank counts and the full count, for any cover (the hinge set is taken
/// literally when the cover is not 2-thin).
pub fn ie_counts(g: &Graph, c: &Cover, oracle: &RankOracle) -> IeCounts {
    let hinges = hinge_set(g, c);
    let ranks = exec::map_slice(&c.parts, |p| {
        let induced = g.induced_edges(p);
        let mut with_hinges = induced.clone();
        with_hinges.extend(
            hinges
                .iter()
                .filter(|h| p.contains_edge(h.pair))
                .map(|h| h.pair),
        );
        with_hinges.sort_unstable();
        with_hinges.dedup();
        (
            oracle.rank_edges(g.n(), &with_hinges),
            oracle.rank_edges(g.n(), &induced),
        )
    });
    let (part_ranks, part_ranks_plain): (Vec<usize>, Vec<usize>) = ranks.into_iter().unzip();
    let all = overlap_correction(&hinges, false);
    IeCounts {
        ie_rank: part_ranks.iter().sum::<usize>() as i64 - all,
        ie_rank_plain: part_ranks_plain.iter().sum::<usize>() as i64
            - overlap_correction(&hinges, true),
        ie_full: full_sum(c, oracle.d) - all,
        part_ranks,
        part_ranks_plain,
        hinges,
    }
}

fn full_sum(c: &Cover, d: usize) -> i64 {
    c.parts.iter().map(|p| tight_size(p.len(), d)).sum()
}

fn require_2thin(c: &Cover) -> Result<()> {
    if is_2thin(c) {
        Ok(())
    } else {
        Err(Error::input("cover is not 2-thin"))
    }
}

pub fn ie_rank(g: &Graph, c: &Cover, oracle: &RankOracle) -> Result<i64> {
    require_2thin(c)?;
    Ok(ie_counts(g, c, oracle).ie_rank)
}

/// Σ full(|X_i|) − Σ_H (n − 1), where `full(j)` is `d·j − l` for parts with
/// at least `d` vertices and the clique count `j(j−1)/2` below that.
pub fn ie_full(g: &Graph, c: &Cover, d: usize) -> Result<i64> {
    require_2thin(c)?;
    Ok(full_sum(c, d) - overlap_correction(&hinge_set(g, c), false))
}

/// Bipartite graph of component nodes (one per part) and hinge nodes (one per
/// `(d-1)`-clique of `g` lying in at least two parts).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGraph {
    /// Original part index of each component node.
    pub labels: Vec<usize>,
    /// Hinge node vertex sets with the component nodes containing them.
    pub hinges: Vec<(VertexSet, Vec<usize>)>,
}

impl ComponentGraph {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.hinges
            .iter()
            .filter(|(_, m)| m.contains(&node))
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for (_, members) in &self.hinges {
            for &x in members {
                deg[x] += 1;
            }
        }
        deg
    }

    /// Sub-component-graph on `nodes` (local ids), keeping hinge nodes that
    /// still join at least two of them.
    pub fn restrict(&self, nodes: &[usize]) -> ComponentGraph {
        let pos: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let hinges = self
            .hinges
            .iter()
            .filter_map(|(h, members)| {
                let kept: Vec<usize> = members.iter().filter_map(|x| pos.get(x).copied()).collect();
                (kept.len() >= 2).then(|| (h.clone(), kept))
            })
            .collect();
        ComponentGraph {
            labels: nodes.iter().map(|&x| self.labels[x]).collect(),
            hinges,
        }
    }

    /// Graphviz rendering: circles for component nodes, boxes for hinges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph C {\n");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  c{i} [shape=circle, label=\"X{label}\"];");
        }
        for (j, (h, members)) in self.hinges.iter().enumerate() {
            let _ = writeln!(out, "  h{j} [shape=box, label=\"{h}\"];");
            for m in members {
                let _ = writeln!(out, "  c{m} -- h{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Component graph of a cover in dimension `d ≥ 2`.
pub fn component_graph(g: &Graph, c: &Cover, d: usize) -> ComponentGraph {
    let k = d.max(2) - 1;
    let mut shared: BTreeMap<VertexSet, BTreeSet<usize>> = BTreeMap::new();
    for (i, p) in c.parts.iter().enumerate() {
        for (j, q) in c.parts.iter().enumerate().skip(i + 1) {
            let common = p.intersection(q).into_vec();
            if common.len() < k {
                continue;
            }
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let h = VertexSet::new(idx.iter().map(|&x| common[x]));
                if g.is_clique(&h) {
                    shared.entry(h).or_default().extend([i, j]);
                }
                let Some(pos) = (0..k).rev().find(|&x| idx[x] != x + common.len() - k) else {
                    break;
                };
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
            }
        }
    }
    ComponentGraph {
        labels: (0..c.len()).collect(),
        hinges: shared
            .into_iter()
            .map(|(h, m)| (h, m.into_iter().collect()))
            .collect(),
    }
}

/// Rounds of simultaneous leaf removal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelResult {
    pub m: usize,
    /// Component nodes removed in each round, in node order.
    pub rounds: Vec<Vec<usize>>,
    /// Component nodes that never became removable.
    pub kernel: Vec<usize>,
    /// Hinge nodes left in the kernel.
    pub kernel_hinges: Vec<usize>,
}

impl PeelResult {
    pub fn removal_order(&self) -> Vec<usize> {
        self.rounds.iter().flatten().copied().collect()
    }

    pub fn kernel_is_empty(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Repeatedly removes every component node of degree `≤ m`, then every hinge
/// node left joining at most one component node.
pub fn peel(cg: &ComponentGraph, m: usize) -> PeelResult {
    let n = cg.node_count();
    let mut alive = vec![true; n];
    let mut hinge_alive = vec![true; cg.hinges.len()];
    let mut rounds = Vec::new();
    loop {
        let mut deg = vec![0; n];
        for (j, (_, members)) in cg.hinges.iter().enumerate() {
            if hinge_alive[j] {
                for &x in members {
                    deg[x] += 1;
                }
            }
        }
        let round: Vec<usize> = (0..n).filter(|&x| alive[x] && deg[x] <= m).collect();
        for &x in &round {
            alive[x] = false;
        }
        let mut dropped = false;
        for (j, (_, members)) in cg.hinges.iter().enumerate() {
            if hinge_alive[j] && members.iter().filter(|&&x| alive[x]).count() <= 1 {
                hinge_alive[j] = false;
                dropped = true;
            }
        }
        if round.is_empty() && !dropped {
            break;
        }
        if !round.is_empty() {
            rounds.push(round);
        }
    }
    PeelResult {
        m,
        rounds,
        kernel: (0..n).filter(|&x| alive[x]).collect(),
        kernel_hinges: (0..cg.hinges.len()).filter(|&j| hinge_alive[j]).collect(),
    }
}

/// Vertex-level peeling of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPeel {
    pub m: usize,
    pub rounds: Vec<Vec<usize>>,
    pub kernel: VertexSet,
}

/// Repeatedly removes every vertex of degree `≤ m` in the remaining graph.
pub fn peel_graph(g: &Graph, m: usize) -> GraphPeel {
    let mut alive = vec![true; g.n()];
    let mut rounds = Vec::new();
    loop {
        let round: Vec<usize> = (0..g.n())
            .filter(|&v| alive[v] && g.neighbors(v).iter().filter(|&&w| alive[w]).count() <= m)
            .collect();
        if round.is_empty() {
            break;
        }
        for &v in &round {
            alive[v] = false;
        }
        rounds.push(round);
    }
    GraphPeel {
        m,
        rounds,
        kernel: (0..g.n()).filter(|&v| alive[v]).collect(),
    }
}

/// Mean hinge degree of the sub-component-graph on `nodes`.
pub fn avg_component_degree(cg: &ComponentGraph, nodes: &[usize]) -> Result<Ratio<i64>> {
    if nodes.is_empty() {
        return Err(Error::input("average degree of an empty node set"));
    }
    let sub = cg.restrict(nodes);
    let total: usize = sub.degrees().iter().sum();
    Ok(Ratio::new(total as i64, nodes.len() as i64))
}
