//! Named graphs and the builtin test corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{self, Graph, VertexSet};
use crate::sparsity;

pub const CORPUS_SEED: u64 = 0xC0FFEE;
pub const RANDOM_ENTRIES: usize = 50;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
    /// A cover recorded by the generator, when it has one.
    pub cover: Option<Vec<VertexSet>>,
}

impl CorpusEntry {
    fn new(name: impl Into<String>, graph: Graph, cover: Option<Vec<VertexSet>>) -> Self {
        CorpusEntry {
            name: name.into(),
            graph,
            cover,
        }
    }
}

/// Random graph on 5 to 8 vertices with between `n` and `2n + 1` edges,
/// fully determined by `seed`.
pub fn small_random(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(5..=8);
    let hi = (2 * n + 1).min(n * (n - 1) / 2);
    let m = rng.gen_range(n..=hi);
    graph::random_graph(n, m, rng.gen()).expect("edge count fits")
}

/// Generator lookup used by the CLI. `args` holds the numeric arguments.
pub fn by_name(name: &str, args: &[u64], hinge: bool) -> Result<CorpusEntry> {
    let arg = |i: usize| -> Result<usize> {
        args.get(i).map(|&x| x as usize).ok_or_else(|| {
            Error::InvalidInput(format!("generator `{name}` needs argument {}", i + 1))
        })
    };
    let entry = match name {
        "double-banana" => {
            let label = if hinge {
                "double-banana"
            } else {
                "double-banana-hingeless"
            };
            CorpusEntry::new(label, graph::double_banana(hinge), Some(banana_parts()))
        }
        "double-banana-bar" => CorpusEntry::new(name, graph::double_banana_bar(), None),
        "n-banana" => {
            let (g, c) = graph::n_banana_with_cover(arg(0)?)?;
            CorpusEntry::new(format!("n-banana-{}", arg(0)?), g, Some(c))
        }
        "k5-ring" => {
            let (g, c) = graph::k5_ring_with_cover(arg(0)?)?;
            CorpusEntry::new(format!("k5-ring-{}", arg(0)?), g, Some(c))
        }
        "smr-counter" => {
            let s = graph::smr_counter();
            CorpusEntry::new(name, s.graph, Some(s.cover))
        }
        "complete" => CorpusEntry::new(
            format!("complete-{}", arg(0)?),
            graph::complete(arg(0)?),
            None,
        ),
        "path" => CorpusEntry::new(format!("path-{}", arg(0)?), graph::path(arg(0)?), None),
        "cycle" => {
            if arg(0)? < 3 {
                return Err(Error::InvalidInput(
                    "cycle needs at least 3 vertices".into(),
                ));
            }
            CorpusEntry::new(format!("cycle-{}", arg(0)?), graph::cycle(arg(0)?), None)
        }
        "two-k5-vertex" => CorpusEntry::new(name, graph::two_k5_sharing_vertex(), None),
        "three-k5-chain" => CorpusEntry::new(name, graph::three_k5_chain(), None),
        "random" => {
            let (n, m) = (arg(0)?, arg(1)?);
            let seed = args.get(2).copied().unwrap_or(CORPUS_SEED);
            CorpusEntry::new(
                format!("random-{n}-{m}-{seed}"),
                graph::random_graph(n, m, seed)?,
                None,
            )
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown generator `{name}`; expected one of {}",
                GENERATORS.join(", ")
            )))
        }
    };
    Ok(entry)
}

pub const GENERATORS: &[&str] = &[
    "double-banana",
    "double-banana-bar",
    "n-banana",
    "k5-ring",
    "smr-counter",
    "complete",
    "path",
    "cycle",
    "two-k5-vertex",
    "three-k5-chain",
    "random",
];

fn banana_parts() -> Vec<VertexSet> {
    vec![VertexSet::new(0..5), VertexSet::new(3..8)]
}

/// Double banana with and without hinge, the barred double banana,
/// n-bananas for n = 2..5, K5 rings of length 3..8, the five-ring example and
/// fifty seeded random graphs on at most 8 vertices.
pub fn builtin() -> Vec<CorpusEntry> {
    let mut out = vec![
        CorpusEntry::new(
            "double-banana",
            graph::double_banana(true),
            Some(banana_parts()),
        ),
        CorpusEntry::new(
            "double-banana-hingeless",
            graph::double_banana(false),
            Some(banana_parts()),
        ),
        CorpusEntry::new("double-banana-bar", graph::double_banana_bar(), None),
    ];
    for n in 2..=5 {
        let (g, c) = graph::n_banana_with_cover(n).expect("n ≥ 1");
        out.push(CorpusEntry::new(format!("n-banana-{n}"), g, Some(c)));
    }
    for n in 3..=8 {
        let (g, c) = graph::k5_ring_with_cover(n).expect("n ≥ 3");
        out.push(CorpusEntry::new(format!("k5-ring-{n}"), g, Some(c)));
    }
    let smr = graph::smr_counter();
    out.push(CorpusEntry::new("smr-counter", smr.graph, Some(smr.cover)));
    for i in 0..RANDOM_ENTRIES as u64 {
        out.push(CorpusEntry::new(
            format!("random-{i}"),
            small_random(CORPUS_SEED + i),
            None,
        ));
    }
    out
}

/// Maxwell-independent graphs derived from the builtin corpus: every entry
/// that already is one, the lexicographic greedy maximal Maxwell-independent
/// subgraph of every other entry, and the small maximal set of the five-ring
/// example.
pub fn maxwell_independent(d: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for entry in builtin() {
        if sparsity::is_maxwell_independent(&entry.graph, d) {
            out.push(entry);
        } else {
            let m = sparsity::greedy_maximal(&entry.graph, d).to_vec();
            let g = entry.graph.with_edges(m);
            out.push(CorpusEntry::new(format!("{}/greedy", entry.name), g, None));
        }
    }
    let smr = graph::smr_counter();
    let small = smr.graph.with_edges(smr.small_maximal_set());
    out.push(CorpusEntry::new("smr-counter/small-maximal", small, None));
    out
}
