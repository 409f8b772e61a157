//! Counterexample searches over a seeded stream of graphs.
//!
//! Graph `i` of a stream is built from `seed + i` alone: three of every four
//! are uniform random graphs, the fourth is a small random edit of a named
//! example. Chunks of the stream are evaluated in parallel and the lowest
//! failing index wins, so reports do not depend on scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{maximal_sets, MaximalSets};
use crate::covers::{
    self, avg_component_degree, component_graph, vertex_maximal_components, Cover,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{self, Edge, Graph, VertexSet};
use crate::rank::RankOracle;
use crate::sparsity::{self, StrongRigidity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conjecture {
    /// Every maximal Maxwell-independent set is at least as large as the rank.
    #[serde(rename = "kdim")]
    Kdim,
    /// Component graphs of maximal Maxwell-independent sets have average
    /// hinge degree below `d + 1`.
    #[serde(rename = "kdimTree")]
    KdimTree,
    /// Independent body-hinge structures average fewer than 3 hinges per body.
    #[serde(rename = "bodyhinge")]
    Bodyhinge,
    /// Vertex-maximal strong Maxwell-rigid subgraphs meet pairwise in at most
    /// two vertices.
    #[serde(rename = "strong2co")]
    Strong2co,
}

impl FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kdim" => Ok(Conjecture::Kdim),
            "kdimTree" | "kdimtree" | "kdim-tree" => Ok(Conjecture::KdimTree),
            "bodyhinge" => Ok(Conjecture::Bodyhinge),
            "strong2co" => Ok(Conjecture::Strong2co),
            _ => Err(Error::InvalidInput(format!(
                "unknown conjecture `{s}`; expected kdim, kdimTree, bodyhinge or strong2co"
            ))),
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Conjecture::Kdim => "kdim",
            Conjecture::KdimTree => "kdimTree",
            Conjecture::Bodyhinge => "bodyhinge",
            Conjecture::Strong2co => "strong2co",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub seed: u64,
    /// Number of stream graphs to examine.
    pub budget: usize,
    /// Largest random graph order.
    pub n_max: usize,
    /// Random greedy orders tried per graph.
    pub samples: usize,
    /// Enumeration cap for strong-rigidity checks.
    pub cap_enum: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            seed: 0xC0FFEE,
            budget: 500,
            n_max: 8,
            samples: 8,
            cap_enum: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: usize,
    pub seed: u64,
    pub source: String,
    /// Edge list in the plain text format.
    pub graph: String,
    pub witness: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub conjecture: Conjecture,
    pub d: usize,
    pub seed: u64,
    pub graphs_examined: usize,
    /// Examined graphs the predicate did not apply to (or could not decide).
    pub skipped: usize,
    pub counterexample: Option<Counterexample>,
    pub runtime_ms: u64,
}

/// Result of evaluating a conjecture on one graph.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Holds,
    Skipped(String),
    Fails(serde_json::Value),
}

const CHUNK: usize = 128;

fn mutation_bases() -> Vec<(&'static str, Graph)> {
    vec![
        ("double-banana", graph::double_banana(true)),
        ("double-banana-hingeless", graph::double_banana(false)),
        ("double-banana-bar", graph::double_banana_bar()),
        ("n-banana-2", graph::n_banana(2).expect("n ≥ 1")),
        ("k5-ring-3", graph::k5_ring(3).expect("n ≥ 3")),
        ("two-k5-vertex", graph::two_k5_sharing_vertex()),
        ("three-k5-chain", graph::three_k5_chain()),
        ("complete-6", graph::complete(6)),
    ]
}

/// Graph number `i` of the stream, with a description of where it came from.
pub fn stream_graph(
    conj: Conjecture,
    d: usize,
    params: &SearchParams,
    i: usize,
) -> (Graph, String) {
    let seed = params.seed.wrapping_add(i as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if i % 4 == 3 {
        let limit = if conj == Conjecture::Strong2co {
            params.n_max.max(4)
        } else {
            usize::MAX
        };
        let bases: Vec<_> = mutation_bases()
            .into_iter()
            .filter(|(_, g)| g.n() <= limit)
            .collect();
        if let Some((name, base)) = bases.choose(&mut rng) {
            let n = base.n();
            let mut edges: std::collections::BTreeSet<Edge> =
                base.edges().iter().copied().collect();
            let flips = rng.gen_range(1..=2);
            for _ in 0..flips {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                let e = Edge::new(a, b);
                if !edges.remove(&e) {
                    edges.insert(e);
                }
            }
            return (
                Graph::from_edges(n, edges),
                format!("{name} edited with {flips} flips, seed {seed}"),
            );
        }
    }
    let hi = params.n_max.max(3);
    let lo = (d + 2).min(hi);
    let n = rng.gen_range(lo..=hi);
    let full = n * (n - 1) / 2;
    let target = sparsity::tight_size(n, d).max(n as i64) as usize;
    let m = rng.gen_range(n.min(full)..=(target + 3).min(full));
    let g = graph::random_graph(n, m, rng.gen()).expect("edge count fits");
    (g, format!("random n={n} m={m}, seed {seed}"))
}

fn edges_json(edges: &[Edge]) -> serde_json::Value {
    json!(edges.iter().map(|e| [e.u(), e.v()]).collect::<Vec<_>>())
}

/// Node subsets on which average degrees are checked: all of them for small
/// component graphs, otherwise the full set plus seeded random subsets.
fn node_subsets(count: usize, seed: u64) -> Vec<Vec<usize>> {
    if count == 0 {
        return Vec::new();
    }
    if count <= 10 {
        return (1u32..(1 << count))
            .map(|mask| (0..count).filter(|&i| mask >> i & 1 == 1).collect())
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![(0..count).collect::<Vec<_>>()];
    for _ in 0..256 {
        let sub: Vec<usize> = (0..count).filter(|_| rng.gen_bool(0.5)).collect();
        if !sub.is_empty() {
            out.push(sub);
        }
    }
    out
}

/// First node subset whose average hinge degree reaches `limit`.
fn degree_violation(
    cg: &covers::ComponentGraph,
    limit: i64,
    seed: u64,
) -> Option<(Vec<usize>, String)> {
    node_subsets(cg.node_count(), seed)
        .into_iter()
        .find_map(|sub| {
            let avg = avg_component_degree(cg, &sub).expect("nonempty");
            (avg >= num_rational::Ratio::from_integer(limit)).then(|| (sub, avg.to_string()))
        })
}

fn is_thin(cover: &Cover, k: usize) -> bool {
    let p = cover.parts();
    (0..p.len()).all(|i| (i + 1..p.len()).all(|j| p[i].intersection(&p[j]).len() <= k))
}

/// Evaluates `conj` on `g`.
pub fn evaluate(
    conj: Conjecture,
    g: &Graph,
    params: &SearchParams,
    oracle: &RankOracle,
    seed: u64,
) -> Outcome {
    let d = oracle.d;
    match conj {
        Conjecture::Kdim => {
            let rank = oracle.generic_rank(g);
            let (sets, _) = maximal_sets(
                g,
                d,
                MaximalSets::Sample {
                    k: params.samples,
                    seed,
                },
            );
            sets.into_iter()
                .find(|s| s.len() < rank)
                .map_or(Outcome::Holds, |s| {
                    let m: Vec<Edge> = s.iter().map(|&i| g.edge(i)).collect();
                    Outcome::Fails(json!({ "rank": rank, "M": edges_json(&m) }))
                })
        }
        Conjecture::KdimTree => {
            let (sets, _) = maximal_sets(
                g,
                d,
                MaximalSets::Sample {
                    k: params.samples.min(4),
                    seed,
                },
            );
            let mut thin_seen = false;
            for s in sets {
                let m: Vec<Edge> = s.iter().map(|&i| g.edge(i)).collect();
                let mg = g.with_edges(m.iter().copied());
                let cover = vertex_maximal_components(&mg, d).expect("M is Maxwell-independent");
                if !is_thin(&cover, d - 1) {
                    continue;
                }
                thin_seen = true;
                let cg = component_graph(&mg, &cover, d);
                if let Some((sub, avg)) = degree_violation(&cg, d as i64 + 1, seed) {
                    return Outcome::Fails(json!({
                        "M": edges_json(&m),
                        "cover": cover.parts(),
                        "nodes": sub,
                        "average_degree": avg,
                    }));
                }
            }
            if thin_seen {
                Outcome::Holds
            } else {
                Outcome::Skipped(format!("no sampled cover was {}-thin", d - 1))
            }
        }
        Conjecture::Bodyhinge => {
            let m = sparsity::greedy_maximal(g, 3).to_vec();
            let indep = oracle
                .extend_to_maximal_independent(g.n(), &[], &m)
                .expect("empty base");
            let ig = g.with_edges(indep.iter().copied());
            let cover = vertex_maximal_components(&ig, 3)
                .expect("independent sets are Maxwell-independent");
            let cg = component_graph(&ig, &cover, 3);
            match degree_violation(&cg, 3, seed) {
                None => Outcome::Holds,
                Some((sub, avg)) => Outcome::Fails(json!({
                    "I": edges_json(&indep),
                    "cover": cover.parts(),
                    "nodes": sub,
                    "average_degree": avg,
                })),
            }
        }
        Conjecture::Strong2co => match strong_components(g, params.cap_enum) {
            Err(reason) => Outcome::Skipped(reason),
            Ok(parts) => {
                for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        if parts[i].intersection(&parts[j]).len() > 2 {
                            return Outcome::Fails(json!({
                                "parts": parts,
                                "pair": [i, j],
                            }));
                        }
                    }
                }
                Outcome::Holds
            }
        },
    }
}

/// Vertex-maximal vertex sets inducing strong Maxwell-rigid subgraphs, by
/// exhaustive scan (at most 12 vertices). Fails if some strong-rigidity check
/// hit the enumeration cap.
pub fn strong_components(
    g: &Graph,
    cap_enum: usize,
) -> std::result::Result<Vec<VertexSet>, String> {
    let n = g.n();
    if n > covers::DEFAULT_SCAN_CAP {
        return Err(format!("{n} vertices exceed the scan limit"));
    }
    let mut found: Vec<VertexSet> = Vec::new();
    for k in (2..=n).rev() {
        let level: Vec<VertexSet> = (0u32..1 << n)
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| {
                (0..n)
                    .filter(|&v| mask >> v & 1 == 1)
                    .collect::<VertexSet>()
            })
            .filter(|x| !found.iter().any(|f| x.is_subset(f)))
            .collect();
        let verdicts = exec::map_slice(&level, |x| {
            let sub = g.induced_subgraph(x).expect("in range").graph;
            if !sparsity::is_maxwell_rigid(&sub, 3) {
                return Some(false);
            }
            match sparsity::is_strong_maxwell_rigid(&sub, 3, Some(cap_enum)) {
                StrongRigidity::Strong => Some(true),
                StrongRigidity::NotStrong(_) => Some(false),
                StrongRigidity::Indeterminate => None,
            }
        });
        for (x, v) in level.into_iter().zip(verdicts) {
            match v {
                Some(true) => found.push(x),
                Some(false) => {}
                None => return Err(format!("strong rigidity of {x} undecided within the cap")),
            }
        }
    }
    found.sort();
    Ok(found)
}

/// Runs the search and stops at the first counterexample in stream order.
pub fn search_conjecture(
    conj: Conjecture,
    params: &SearchParams,
    oracle: &RankOracle,
) -> Result<SearchReport> {
    let d = oracle.d;
    match conj {
        Conjecture::Kdim if d < 2 => return Err(Error::InvalidInput("kdim needs d ≥ 2".into())),
        Conjecture::KdimTree if !(2..=5).contains(&d) => {
            return Err(Error::InvalidInput(
                "kdimTree is searched for d = 2..5".into(),
            ))
        }
        Conjecture::Bodyhinge | Conjecture::Strong2co if d != 3 => {
            return Err(Error::InvalidInput(format!(
                "{conj} is a 3-dimensional statement"
            )))
        }
        _ => {}
    }
    let start = Instant::now();
    let mut skipped = 0;
    let mut counterexample = None;
    let mut examined = 0;
    let mut lo = 0;
    while lo < params.budget && counterexample.is_none() {
        let len = CHUNK.min(params.budget - lo);
        let outcomes = exec::map_indexed(len, |k| {
            let i = lo + k;
            let (g, source) = stream_graph(conj, d, params, i);
            let seed = params.seed.wrapping_add(i as u64);
            let outcome = evaluate(conj, &g, params, oracle, seed);
            (g, source, outcome)
        });
        for (k, (g, source, outcome)) in outcomes.into_iter().enumerate() {
            examined = lo + k + 1;
            match outcome {
                Outcome::Holds => {}
                Outcome::Skipped(_) => skipped += 1,
                Outcome::Fails(witness) => {
                    counterexample = Some(Counterexample {
                        index: lo + k,
                        seed: params.seed.wrapping_add((lo + k) as u64),
                        source,
                        graph: graph::write_graph(&g),
                        witness,
                    });
                    break;
                }
            }
        }
        lo += len;
    }
    Ok(SearchReport {
        conjecture: conj,
        d,
        seed: params.seed,
        graphs_examined: examined,
        skipped,
        counterexample,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjecture_names_round_trip() {
        for c in [
            Conjecture::Kdim,
            Conjecture::KdimTree,
            Conjecture::Bodyhinge,
            Conjecture::Strong2co,
        ] {
            assert_eq!(c.to_string().parse::<Conjecture>().unwrap(), c);
        }
        assert!("nope".parse::<Conjecture>().is_err());
    }

    #[test]
    fn stream_is_reproducible() {
        let p = SearchParams::default();
        for i in 0..8 {
            assert_eq!(
                stream_graph(Conjecture::Kdim, 3, &p, i),
                stream_graph(Conjecture::Kdim, 3, &p, i)
            );
        }
    }

    #[test]
    fn kdim_in_the_plane_holds() {
        let o = RankOracle::new(2, 2, 1).unwrap();
        let p = SearchParams {
            budget: 40,
            ..SearchParams::default()
        };
        let r = search_conjecture(Conjecture::Kdim, &p, &o).unwrap();
        assert!(r.counterexample.is_none());
        assert_eq!(r.graphs_examined, 40);
    }

    #[test]
    fn strong_components_of_double_banana() {
        let parts = strong_components(&graph::double_banana(true), 2000).unwrap();
        assert_eq!(parts, vec![VertexSet::new(0..5), VertexSet::new(3..8)]);
    }
}
