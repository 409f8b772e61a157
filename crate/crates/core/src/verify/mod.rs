//! Checkable certificates for the rank bounds and counterexample searches for
//! the open conjectures.
//!
//! A [`Certificate`] stores every inequality of a bound as plain numbers, so
//! [`Certificate::revalidate`] can re-check it after a JSON round trip without
//! touching any oracle.

mod search;

pub use search::{search_conjecture, Conjecture, Counterexample, SearchParams, SearchReport};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::assignment::{assignment_bound, construct_assignment, shared_edges, verify_assignment};
use crate::covers::{self, ie_counts, is_2thin, is_strong_2thin, vertex_maximal_components, Cover};
use crate::error::Result;
use crate::exec;
use crate::graph::{Edge, EdgeSubset, Graph, VertexSet};
use crate::rank::RankOracle;
use crate::sparsity::{self, tight_size};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: i64,
    pub relation: Relation,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The hypotheses do not hold for this input; recorded terms are
    /// informational.
    Inapplicable,
}

/// Per-part terms of the main bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartTerms {
    pub vertices: VertexSet,
    pub edges: usize,
    pub rank: usize,
    pub assigned: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem: String,
    /// Which branch of the argument applied, or why it did not apply.
    pub branch: String,
    pub verdict: Verdict,
    pub inequalities: Vec<Inequality>,
    pub numbers: BTreeMap<String, i64>,
    pub sets: BTreeMap<String, Vec<Edge>>,
    pub cover: Vec<VertexSet>,
    pub parts: Vec<PartTerms>,
    /// Shared edges with the number of parts containing each.
    pub hinges: Vec<(Edge, usize)>,
}

impl Certificate {
    fn new(theorem: &str, branch: &str) -> Self {
        Certificate {
            theorem: theorem.to_string(),
            branch: branch.to_string(),
            verdict: Verdict::Pass,
            inequalities: Vec::new(),
            numbers: BTreeMap::new(),
            sets: BTreeMap::new(),
            cover: Vec::new(),
            parts: Vec::new(),
            hinges: Vec::new(),
        }
    }

    fn num(&mut self, key: &str, value: impl TryInto<i64>) {
        let v = value.try_into().ok().expect("fits in i64");
        self.numbers.insert(key.to_string(), v);
    }

    fn check(&mut self, name: impl Into<String>, lhs: i64, relation: Relation, rhs: i64) {
        self.inequalities.push(Inequality {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds: relation.holds(lhs, rhs),
        });
    }

    fn finish(mut self) -> Self {
        if self.verdict != Verdict::Inapplicable {
            self.verdict = if self.inequalities.iter().all(|i| i.holds) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
        }
        self
    }

    fn inapplicable(mut self, why: &str) -> Self {
        self.branch = why.to_string();
        self.verdict = Verdict::Inapplicable;
        self
    }

    /// Re-checks every recorded inequality from its numbers alone and
    /// confirms the verdict agrees.
    pub fn revalidate(&self) -> bool {
        let all = self
            .inequalities
            .iter()
            .all(|i| i.holds == i.relation.holds(i.lhs, i.rhs));
        let verdict_ok = match self.verdict {
            Verdict::Pass => self.inequalities.iter().all(|i| i.holds),
            Verdict::Fail => self.inequalities.iter().any(|i| !i.holds),
            Verdict::Inapplicable => true,
        };
        all && verdict_ok
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Which maximal Maxwell-independent sets the main bound is checked on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaximalSets {
    /// Every maximal set, up to `cap` of them.
    All { cap: Option<usize> },
    /// The lexicographic greedy set plus `k` seeded random greedy orders.
    Sample { k: usize, seed: u64 },
}

pub const DEFAULT_SAMPLE: usize = 50;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MainReport {
    pub rank: usize,
    pub truncated: bool,
    pub certificates: Vec<Certificate>,
}

impl MainReport {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }

    pub fn min_size(&self) -> Option<i64> {
        self.certificates
            .iter()
            .filter_map(|c| c.numbers.get("M").copied())
            .min()
    }
}

/// Sorted edge-index lists of the maximal sets selected by `mode`.
pub fn maximal_sets(g: &Graph, d: usize, mode: MaximalSets) -> (Vec<Vec<usize>>, bool) {
    match mode {
        MaximalSets::All { cap } => {
            let e = sparsity::enumerate_maximal_maxwell_independent(g, d, cap);
            let sets = e.sets.iter().map(|s| s.indices().collect()).collect();
            (sets, e.truncated)
        }
        MaximalSets::Sample { k, seed } => {
            let m = g.edge_count();
            let mut orders = vec![(0..m).collect::<Vec<_>>()];
            orders.extend((0..k as u64).map(|j| sparsity::random_order(m, seed.wrapping_add(j))));
            let found = exec::map_slice(&orders, |o| {
                let s = sparsity::maximal_maxwell_independent(g, d, o).expect("valid order");
                s.indices().collect::<Vec<usize>>()
            });
            let mut seen = BTreeSet::new();
            let sets = found
                .into_iter()
                .filter(|s| seen.insert(s.clone()))
                .collect();
            (sets, false)
        }
    }
}

/// Checks `|M| ≥ rank(G)` on the selected maximal Maxwell-independent sets,
/// with the full decomposition argument recorded whenever `M` is neither
/// independent nor tight.
pub fn verify_main(g: &Graph, mode: MaximalSets, oracle: &RankOracle) -> MainReport {
    let d = oracle.d;
    let rank = oracle.generic_rank(g);
    let (sets, truncated) = maximal_sets(g, d, mode);
    let certificates = exec::map_slice(&sets, |idx| {
        let m: Vec<Edge> = idx.iter().map(|&i| g.edge(i)).collect();
        main_certificate(g, &m, rank, oracle)
    });
    MainReport {
        rank,
        truncated,
        certificates,
    }
}

/// Certificate of `|M| ≥ rank(G)` for one maximal Maxwell-independent `M`.
pub fn main_certificate(g: &Graph, m: &[Edge], rank: usize, oracle: &RankOracle) -> Certificate {
    let d = oracle.d;
    let n = g.n();
    let mut c = Certificate::new("main", "decomposition");
    c.num("M", m.len());
    c.num("rank_G", rank);
    c.sets.insert("M".into(), m.to_vec());
    let conclusion = |c: &mut Certificate| {
        c.check("conclusion", m.len() as i64, Relation::Ge, rank as i64);
    };

    if oracle.is_independent(n, m) {
        c.branch = "M independent".into();
        c.check(
            "independent_M_is_a_basis",
            m.len() as i64,
            Relation::Eq,
            rank as i64,
        );
        conclusion(&mut c);
        return c.finish();
    }
    if sparsity::is_tight_on_support(m, d) {
        c.branch = "M Maxwell-rigid".into();
        let support: VertexSet = m.iter().flat_map(|e| [e.u(), e.v()]).collect();
        c.num("support", support.len());
        c.check(
            "tight_bound",
            tight_size(support.len(), d),
            Relation::Ge,
            rank as i64,
        );
        conclusion(&mut c);
        return c.finish();
    }

    let mg = g.with_edges(m.iter().copied());
    let cover = match vertex_maximal_components(&mg, d) {
        Ok(cover) => cover,
        Err(e) => return c.inapplicable(&format!("M is not Maxwell-independent: {e}")),
    };
    c.cover = cover.parts().to_vec();
    c.check("cover_2thin", is_2thin(&cover) as i64, Relation::Eq, 1);
    c.check(
        "cover_strong_2thin",
        is_strong_2thin(&mg, &cover) as i64,
        Relation::Eq,
        1,
    );

    let i_m = oracle
        .extend_to_maximal_independent(n, &[], m)
        .expect("empty base is independent");
    let i = oracle
        .extend_to_maximal_independent(n, &i_m, g.edges())
        .expect("I_M is independent");
    let i_m_set: BTreeSet<Edge> = i_m.iter().copied().collect();
    let a: Vec<Edge> = i.iter().copied().filter(|e| !i_m_set.contains(e)).collect();
    c.num("I_M", i_m.len());
    c.num("I", i.len());
    c.num("A", a.len());
    c.sets.insert("I_M".into(), sorted(&i_m));
    c.sets.insert("I".into(), sorted(&i));
    c.sets.insert("A".into(), a.clone());

    let parts = cover.parts();
    let mut assigned = vec![0usize; parts.len()];
    let mut unassigned = 0;
    for e in &a {
        match parts.iter().position(|p| p.contains_edge(*e)) {
            Some(k) => assigned[k] += 1,
            None => unassigned += 1,
        }
    }
    let terms = exec::map_slice(parts, |p| {
        let edges = mg.induced_edges(p);
        (edges.len(), oracle.rank_edges(n, &edges))
    });
    c.parts = parts
        .iter()
        .zip(&terms)
        .zip(&assigned)
        .map(|((p, &(edges, rank)), &assigned)| PartTerms {
            vertices: p.clone(),
            edges,
            rank,
            assigned,
        })
        .collect();
    c.hinges = shared_edges(&mg, parts);
    let overlap: i64 = c.hinges.iter().map(|(_, k)| *k as i64 - 1).sum();
    let sum_edges: i64 = terms.iter().map(|t| t.0 as i64).sum();
    let sum_ranks: i64 = terms.iter().map(|t| t.1 as i64).sum();
    c.num("overlap", overlap);
    c.num("sum_part_edges", sum_edges);
    c.num("sum_part_ranks", sum_ranks);

    c.check("A_partitioned", unassigned, Relation::Eq, 0);
    c.check(
        "I_splits",
        i.len() as i64,
        Relation::Eq,
        (i_m.len() + a.len()) as i64,
    );
    c.check(
        "M_by_parts",
        m.len() as i64,
        Relation::Eq,
        sum_edges - overlap,
    );
    for (k, part) in c.parts.clone().iter().enumerate() {
        c.check(
            format!("part_{k}"),
            part.edges as i64,
            Relation::Ge,
            (part.rank + part.assigned) as i64,
        );
    }
    c.check(
        "summed",
        m.len() as i64,
        Relation::Ge,
        sum_ranks - overlap + a.len() as i64,
    );
    c.check(
        "ie_over_I_M",
        sum_ranks - overlap,
        Relation::Ge,
        i_m.len() as i64,
    );
    c.check("I_is_basis", i.len() as i64, Relation::Eq, rank as i64);
    conclusion(&mut c);
    c.finish()
}

fn sorted(edges: &[Edge]) -> Vec<Edge> {
    let mut v = edges.to_vec();
    v.sort_unstable();
    v
}

/// Bound through an independence assignment of `cover`.
pub fn verify_weak_rank_ie(g: &Graph, cover: &Cover, oracle: &RankOracle) -> Certificate {
    let mut c = Certificate::new("weak-rank-ie", "assignment");
    c.cover = cover.parts().to_vec();
    if !sparsity::is_maxwell_independent(g, oracle.d) {
        return c.inapplicable("graph is not Maxwell-independent");
    }
    let rank = oracle.generic_rank(g);
    c.num("rank", rank);
    let a = match construct_assignment(g, cover, oracle) {
        Ok(a) => a,
        Err(e) => return c.inapplicable(&format!("no assignment: {e}")),
    };
    let (bound, global) = assignment_bound(g, &a);
    c.num("assignment_bound", bound);
    c.num("I", global);
    c.num("max_shared", a.max_shared);
    c.num("m3_suffices", a.m3_suffices as i64);
    c.sets.insert("I".into(), a.global.clone());
    c.hinges = shared_edges(g, cover.parts());
    c.check(
        "assignment_valid",
        verify_assignment(g, &a, oracle).is_ok() as i64,
        Relation::Eq,
        1,
    );
    c.check("I_is_basis", global, Relation::Eq, rank as i64);
    c.check("assignment_count", bound, Relation::Ge, global);
    let counts = ie_counts(g, cover, oracle);
    c.num("ie_rank_plain", counts.ie_rank_plain);
    c.check(
        "conclusion",
        counts.ie_rank_plain,
        Relation::Ge,
        rank as i64,
    );
    c.finish()
}

fn record_ie(c: &mut Certificate, g: &Graph, cover: &Cover, oracle: &RankOracle) -> i64 {
    let counts = ie_counts(g, cover, oracle);
    c.cover = cover.parts().to_vec();
    c.hinges = counts
        .hinges
        .iter()
        .map(|h| (h.pair, h.multiplicity))
        .collect();
    c.num("parts", cover.len());
    c.num("ie_rank", counts.ie_rank);
    c.num("ie_rank_plain", counts.ie_rank_plain);
    c.num("ie_full", counts.ie_full);
    c.num("two_thin", is_2thin(cover) as i64);
    c.num("strong_two_thin", is_strong_2thin(g, cover) as i64);
    counts.ie_rank
}

/// `IE_rank ≥ rank` for an explicit cover of a Maxwell-independent graph.
pub fn verify_rank_ie_with_cover(g: &Graph, cover: &Cover, oracle: &RankOracle) -> Certificate {
    let mut c = Certificate::new("rank-ie", "given cover");
    let ie = record_ie(&mut c, g, cover, oracle);
    let rank = oracle.generic_rank(g);
    c.num("rank", rank);
    c.check("conclusion", ie, Relation::Ge, rank as i64);
    if !sparsity::is_maxwell_independent(g, oracle.d) {
        return c.inapplicable("graph is not Maxwell-independent");
    }
    if !is_2thin(cover) {
        return c.inapplicable("cover is not 2-thin");
    }
    c.finish()
}

/// `IE_rank ≥ rank` over the vertex-maximal components.
pub fn verify_rank_ie(g: &Graph, oracle: &RankOracle) -> Certificate {
    match vertex_maximal_components(g, oracle.d) {
        Ok(cover) => {
            let mut c = verify_rank_ie_with_cover(g, &cover, oracle);
            c.branch = "vertex-maximal components".into();
            c
        }
        Err(e) => Certificate::new("rank-ie", "").inapplicable(&e.to_string()),
    }
}

/// `IE_rank ≥ rank` over the proper vertex-maximal components (exhaustive
/// scan, so at most `cap` vertices). The counts are recorded even when the
/// graph is not Maxwell-independent.
pub fn verify_proper_maximal(g: &Graph, oracle: &RankOracle, cap: usize) -> Result<Certificate> {
    let cover = covers::proper_vertex_maximal_components(g, oracle.d, cap)?;
    let mut c = Certificate::new("proper-maximal", "proper vertex-maximal components");
    let ie = record_ie(&mut c, g, &cover, oracle);
    let rank = oracle.generic_rank(g);
    c.num("rank", rank);
    c.check("conclusion", ie, Relation::Ge, rank as i64);
    if !sparsity::is_maxwell_independent(g, oracle.d) {
        return Ok(c.inapplicable("graph is not Maxwell-independent"));
    }
    Ok(c.finish())
}

/// `IE_full ≥ rank` over the complete collection of vertex-maximal
/// components, plus the maximal Maxwell-independent set of size `IE_full`
/// assembled from maximum sets of the parts.
pub fn verify_complete_2thin(g: &Graph, oracle: &RankOracle, cap: usize) -> Result<Certificate> {
    let cover = covers::vertex_maximal_components_general(g, oracle.d, cap)?;
    Ok(complete_2thin_certificate(
        g,
        &cover,
        oracle,
        "complete-2thin",
        false,
    ))
}

/// As [`verify_complete_2thin`] with the proper vertex-maximal components.
/// A Maxwell-rigid graph is settled by the trivial bound `d|V| - l`.
pub fn verify_proper_complete_2thin(
    g: &Graph,
    oracle: &RankOracle,
    cap: usize,
) -> Result<Certificate> {
    let cover = covers::proper_vertex_maximal_components(g, oracle.d, cap)?;
    Ok(complete_2thin_certificate(
        g,
        &cover,
        oracle,
        "proper-complete-2thin",
        true,
    ))
}

/// Shared part of the complete-cover checks, usable with a recorded cover.
pub fn complete_2thin_certificate(
    g: &Graph,
    cover: &Cover,
    oracle: &RankOracle,
    theorem: &str,
    proper: bool,
) -> Certificate {
    let d = oracle.d;
    let mut c = Certificate::new(theorem, "construction");
    c.cover = cover.parts().to_vec();
    let rank = oracle.generic_rank(g);
    c.num("rank", rank);
    if !is_2thin(cover) {
        return c.inapplicable("cover is not 2-thin");
    }
    let ie_full = covers::ie_full(g, cover, d).expect("2-thin");
    c.num("ie_full", ie_full);
    c.check("conclusion", ie_full, Relation::Ge, rank as i64);
    if proper && sparsity::is_maxwell_rigid(g, d) {
        c.branch = "graph Maxwell-rigid: trivial bound".into();
        let support = g.support().len();
        c.check(
            "trivial_bound",
            tight_size(support, d),
            Relation::Ge,
            rank as i64,
        );
        return c.finish();
    }

    let parts = cover.parts();
    let per_part = exec::map_slice(parts, |p| {
        let induced = g.induced_subgraph(p).expect("in range");
        sparsity::maximum_maxwell_independent(&induced.graph, d)
            .into_iter()
            .map(|e| Edge::new(induced.to_parent[e.u()], induced.to_parent[e.v()]))
            .collect::<BTreeSet<Edge>>()
    });
    let mut union: BTreeSet<Edge> = per_part.iter().flatten().copied().collect();
    let hinges = covers::hinge_set(g, cover);
    for h in hinges.iter().filter(|h| h.is_edge) {
        let holders = (0..parts.len()).filter(|&k| parts[k].contains_edge(h.pair));
        if holders.clone().any(|k| !per_part[k].contains(&h.pair)) {
            union.remove(&h.pair);
        }
    }
    let m: Vec<Edge> = union.into_iter().collect();
    c.num("M", m.len());
    c.num("parts", parts.len());
    c.hinges = hinges.iter().map(|h| (h.pair, h.multiplicity)).collect();
    c.check("M_matches_ie_full", m.len() as i64, Relation::Eq, ie_full);
    let sub = EdgeSubset::from_edges(g, m.iter().copied()).expect("edges of g");
    let mg = sub.to_graph();
    c.check(
        "M_maxwell_independent",
        sparsity::is_maxwell_independent(&mg, d) as i64,
        Relation::Eq,
        1,
    );
    let admissible_left = g
        .edges()
        .iter()
        .filter(|&&e| !sub.contains(e))
        .filter(|&&e| sparsity::edge_admissible(&sub, e, d).unwrap_or(false))
        .count();
    c.check("M_maximal", admissible_left as i64, Relation::Eq, 0);
    c.sets.insert("M".into(), m);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, double_banana, n_banana, three_k5_chain, two_k5_sharing_vertex};

    fn oracle() -> RankOracle {
        RankOracle::new(3, 2, 0xC0FFEE).unwrap()
    }

    #[test]
    fn main_on_double_bananas() {
        let o = oracle();
        let hinged = verify_main(&double_banana(true), MaximalSets::All { cap: None }, &o);
        assert_eq!(hinged.rank, 17);
        assert!(hinged.all_pass());
        assert_eq!(hinged.min_size(), Some(17));
        let free = verify_main(&double_banana(false), MaximalSets::All { cap: None }, &o);
        assert_eq!(free.certificates.len(), 1);
        assert_eq!(free.certificates[0].numbers["M"], 18);
        assert!(free.all_pass());
    }

    #[test]
    fn ie_certificates() {
        let o = oracle();
        let c = verify_rank_ie(&n_banana(4).unwrap(), &o);
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.numbers["rank"], 33);
        let k5 = verify_proper_maximal(&complete(5), &o, 12).unwrap();
        assert_eq!(k5.verdict, Verdict::Inapplicable);
        assert_eq!(k5.numbers["ie_rank"], 30);
        assert!(k5.inequalities.iter().all(|i| i.holds));
    }

    #[test]
    fn complete_cover_certificates() {
        let o = oracle();
        let db = verify_complete_2thin(&double_banana(true), &o, 12).unwrap();
        assert!(db.passed(), "{db:?}");
        assert_eq!(db.numbers["ie_full"], 18);
        let chain = verify_complete_2thin(&three_k5_chain(), &o, 12).unwrap();
        assert_eq!(chain.verdict, Verdict::Inapplicable);
        let two = verify_complete_2thin(&two_k5_sharing_vertex(), &o, 12).unwrap();
        assert!(two.passed(), "{two:?}");
        assert_eq!((two.numbers["ie_full"], two.numbers["rank"]), (18, 18));
    }

    #[test]
    fn revalidation_catches_tampering() {
        let o = oracle();
        let mut c = verify_rank_ie(&double_banana(false), &o);
        assert!(c.revalidate());
        c.inequalities[0].lhs -= 100;
        assert!(!c.revalidate());
    }
}
