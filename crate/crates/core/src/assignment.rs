//! Independence assignments for covers of Maxwell-independent graphs.
//!
//! Parts are visited in reverse peeling order of the component graph, so each
//! part meets at most `m` shared edges from the parts placed before it. Those
//! edges are extended to a maximal independent set of the part, and the new
//! edges join the global set unless they fall in its span.

use serde::{Deserialize, Serialize};

use crate::covers::{component_graph, peel, Cover};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::rank::{IndependenceTracker, RankOracle};

/// Peel parameter used for the part order.
pub const PEEL_M: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceAssignment {
    pub parts: Vec<VertexSet>,
    /// Maximal independent set `I_i` of each part's induced edges.
    pub per_part: Vec<Vec<Edge>>,
    /// The global independent set `I`.
    pub global: Vec<Edge>,
    /// Order in which parts were processed.
    pub order: Vec<usize>,
    /// Largest number of already-placed shared edges met by one part.
    pub max_shared: usize,
    /// Peeling with `m = 3` would also have emptied the component graph.
    pub m3_suffices: bool,
}

/// Edges of `g` lying in at least two parts, with their multiplicity.
pub fn shared_edges(g: &Graph, parts: &[VertexSet]) -> Vec<(Edge, usize)> {
    g.edges()
        .iter()
        .map(|&e| (e, parts.iter().filter(|p| p.contains_edge(e)).count()))
        .filter(|&(_, k)| k >= 2)
        .collect()
}

pub fn construct_assignment(
    g: &Graph,
    cover: &Cover,
    oracle: &RankOracle,
) -> Result<IndependenceAssignment> {
    let cg = component_graph(g, cover, oracle.d);
    let peeled = peel(&cg, PEEL_M);
    if !peeled.kernel_is_empty() {
        return Err(Error::Contract(format!(
            "component graph keeps a kernel of {} nodes at m = {PEEL_M}",
            peeled.kernel.len()
        )));
    }
    let m3_suffices = peel(&cg, 3).kernel_is_empty();
    let mut order = peeled.removal_order();
    order.reverse();

    let parts = cover.parts();
    let mut per_part = vec![Vec::new(); parts.len()];
    let mut placed: Vec<usize> = Vec::new();
    let mut global = IndependenceTracker::new(oracle, g.n());
    let mut max_shared = 0;
    for &p in &order {
        let own = g.induced_edges(&parts[p]);
        let s: Vec<Edge> = own
            .iter()
            .copied()
            .filter(|&e| placed.iter().any(|&q| parts[q].contains_edge(e)))
            .collect();
        if s.len() > PEEL_M {
            return Err(Error::Internal(format!(
                "part {p} meets {} shared edges, more than {PEEL_M}",
                s.len()
            )));
        }
        max_shared = max_shared.max(s.len());
        let ip = oracle
            .extend_to_maximal_independent(g.n(), &s, &own)
            .map_err(|_| Error::Internal(format!("shared edges of part {p} are dependent")))?;
        let mut ip_sorted = ip.clone();
        ip_sorted.sort_unstable();
        for &e in &ip_sorted {
            if !s.contains(&e) && !global.contains(e) && !global.in_span(e) {
                global.try_add(e);
            }
        }
        per_part[p] = ip_sorted;
        placed.push(p);
    }
    let mut global = global.into_edges();
    global.sort_unstable();
    Ok(IndependenceAssignment {
        parts: parts.to_vec(),
        per_part,
        global,
        order,
        max_shared,
        m3_suffices,
    })
}

/// First failed assignment condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssignmentViolation {
    GlobalDependent,
    PartDependent {
        part: usize,
    },
    PartNotMaximal {
        part: usize,
        size: usize,
        rank: usize,
    },
    PartNotInside {
        part: usize,
        edge: Edge,
    },
    RestrictionNotContained {
        part: usize,
        edge: Edge,
    },
    MissingFromTwoParts {
        edge: Edge,
        parts: Vec<usize>,
    },
}

impl std::fmt::Display for AssignmentViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::GlobalDependent => write!(f, "global set is dependent"),
            Self::PartDependent { part } => write!(f, "set of part {part} is dependent"),
            Self::PartNotMaximal { part, size, rank } => {
                write!(
                    f,
                    "set of part {part} has {size} edges but the part has rank {rank}"
                )
            }
            Self::PartNotInside { part, edge } => write!(f, "{edge} is not inside part {part}"),
            Self::RestrictionNotContained { part, edge } => {
                write!(
                    f,
                    "global edge {edge} inside part {part} is missing from its set"
                )
            }
            Self::MissingFromTwoParts { edge, parts } => {
                write!(f, "shared edge {edge} is missing from two parts {parts:?}")
            }
        }
    }
}

/// Checks the three assignment conditions and reports the first violation.
pub fn verify_assignment(
    g: &Graph,
    a: &IndependenceAssignment,
    oracle: &RankOracle,
) -> std::result::Result<(), AssignmentViolation> {
    if !oracle.is_independent(g.n(), &a.global) {
        return Err(AssignmentViolation::GlobalDependent);
    }
    for (i, (part, set)) in a.parts.iter().zip(&a.per_part).enumerate() {
        if let Some(&edge) = set.iter().find(|e| !part.contains_edge(**e)) {
            return Err(AssignmentViolation::PartNotInside { part: i, edge });
        }
        if !oracle.is_independent(g.n(), set) {
            return Err(AssignmentViolation::PartDependent { part: i });
        }
        let rank = oracle.rank_edges(g.n(), &g.induced_edges(part));
        if set.len() != rank {
            return Err(AssignmentViolation::PartNotMaximal {
                part: i,
                size: set.len(),
                rank,
            });
        }
        if let Some(&edge) = a
            .global
            .iter()
            .find(|e| part.contains_edge(**e) && !set.contains(e))
        {
            return Err(AssignmentViolation::RestrictionNotContained { part: i, edge });
        }
    }
    for (edge, _) in shared_edges(g, &a.parts) {
        let missing: Vec<usize> = (0..a.parts.len())
            .filter(|&i| a.parts[i].contains_edge(edge) && !a.per_part[i].contains(&edge))
            .collect();
        if missing.len() >= 2 {
            return Err(AssignmentViolation::MissingFromTwoParts {
                edge,
                parts: missing,
            });
        }
    }
    Ok(())
}

/// `(Σ|I_i| − Σ(n_e − 1), |I|)` over the shared edges; the first should never
/// be smaller.
pub fn assignment_bound(g: &Graph, a: &IndependenceAssignment) -> (i64, i64) {
    let sum: usize = a.per_part.iter().map(Vec::len).sum();
    let overlap: usize = shared_edges(g, &a.parts).iter().map(|(_, k)| k - 1).sum();
    (sum as i64 - overlap as i64, a.global.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::vertex_maximal_components;
    use crate::graph::{complete, k5_ring_with_cover, n_banana_with_cover};

    fn oracle() -> RankOracle {
        RankOracle::new(3, 2, 0xC0FFEE).unwrap()
    }

    #[test]
    fn banana_cover_assignment() {
        let (g, parts) = n_banana_with_cover(2).unwrap();
        let c = Cover::new(&g, parts).unwrap();
        let a = construct_assignment(&g, &c, &oracle()).unwrap();
        assert_eq!(a.global.len(), 17);
        assert!(a.per_part.iter().all(|p| p.len() == 9));
        assert_eq!(verify_assignment(&g, &a, &oracle()), Ok(()));
        assert_eq!(assignment_bound(&g, &a), (18, 17));
    }

    #[test]
    fn single_part() {
        let k5 = complete(5);
        let g = k5.with_edges(k5.edges()[1..].iter().copied());
        let c = vertex_maximal_components(&g, 3).unwrap();
        let a = construct_assignment(&g, &c, &oracle()).unwrap();
        assert_eq!(a.global, a.per_part[0]);
        assert_eq!(verify_assignment(&g, &a, &oracle()), Ok(()));
    }

    #[test]
    fn ring_assignment_and_negative_cases() {
        let (g, parts) = k5_ring_with_cover(7).unwrap();
        let c = Cover::new(&g, parts).unwrap();
        let o = oracle();
        let a = construct_assignment(&g, &c, &o).unwrap();
        assert_eq!(verify_assignment(&g, &a, &o), Ok(()));
        assert!(a.m3_suffices);
        let (lhs, rhs) = assignment_bound(&g, &a);
        assert!(lhs >= rhs);

        // each K5 minus the shared edge is still a maximal independent set
        let mut bad = a.clone();
        let (e, _) = shared_edges(&g, &bad.parts)[0];
        for (part, set) in bad.parts.iter().zip(bad.per_part.iter_mut()) {
            if part.contains_edge(e) {
                *set = g
                    .induced_edges(part)
                    .into_iter()
                    .filter(|&x| x != e)
                    .collect();
            }
        }
        bad.global.clear();
        assert!(matches!(
            verify_assignment(&g, &bad, &o),
            Err(AssignmentViolation::MissingFromTwoParts { edge, .. }) if edge == e
        ));

        let mut dependent = a.clone();
        dependent.global = g.edges().to_vec();
        assert_eq!(
            verify_assignment(&g, &dependent, &o),
            Err(AssignmentViolation::GlobalDependent)
        );
    }
}
