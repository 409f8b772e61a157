//! Generic rank of the `d`-dimensional bar-joint rigidity matrix.
//!
//! Placements are drawn uniformly from `Z_p^d` with `p = 2^61 - 1`. A random
//! placement can only lose rank, so the maximum over a few trials is the
//! generic rank except with probability far below `10^-12` at these sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::field::{self, EchelonBasis, PRIME};
use crate::graph::{Edge, Graph};

/// One point in `Z_p^d` per vertex.
pub type Placement = Vec<Vec<u64>>;

/// Dense rigidity matrix: one row per edge in the given order, `d` columns
/// per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityMatrix {
    pub d: usize,
    pub cols: usize,
    pub rows: Vec<Vec<u64>>,
}

impl RigidityMatrix {
    pub fn rank(&self) -> usize {
        field::rank(&self.rows, self.cols)
    }
}

fn row(p: &Placement, e: Edge, d: usize, cols: usize) -> Vec<u64> {
    let mut r = vec![0; cols];
    for c in 0..d {
        let diff = field::sub(p[e.u()][c], p[e.v()][c]);
        r[e.u() * d + c] = diff;
        r[e.v() * d + c] = field::neg(diff);
    }
    r
}

/// The first edge whose endpoints agree in some coordinate, which would drop
/// entries from its row.
fn degenerate_edge(p: &Placement, edges: &[Edge], d: usize) -> Option<Edge> {
    edges
        .iter()
        .copied()
        .find(|e| (0..d).any(|c| p[e.u()][c] == p[e.v()][c]))
}

/// Builds `R_d` for `edges` at `placement`. An edge whose endpoints share a
/// coordinate is returned as the error so the caller can resample.
pub fn build_matrix(
    n: usize,
    edges: &[Edge],
    placement: &Placement,
    d: usize,
) -> std::result::Result<RigidityMatrix, Edge> {
    assert!(placement.len() >= n && placement.iter().all(|p| p.len() == d));
    if let Some(e) = degenerate_edge(placement, edges, d) {
        return Err(e);
    }
    let cols = n * d;
    Ok(RigidityMatrix {
        d,
        cols,
        rows: edges.iter().map(|&e| row(placement, e, d, cols)).collect(),
    })
}

const MAX_ATTEMPTS: u64 = 64;

/// Randomised generic-rank evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOracle {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Oracle parameters as recorded in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleInfo {
    pub prime: u64,
    pub trials: usize,
}

impl RankOracle {
    pub fn new(d: usize, trials: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if trials < 2 {
            return Err(Error::input("the rank oracle needs at least 2 trials"));
        }
        Ok(RankOracle { d, trials, seed })
    }

    pub fn info(&self) -> OracleInfo {
        OracleInfo {
            prime: PRIME,
            trials: self.trials,
        }
    }

    /// Seeded placement of `n` vertices. The stream depends only on
    /// `(seed, trial, attempt)` and vertex `i` always gets the same point, so
    /// placements of nested vertex ranges agree on their common prefix.
    pub fn placement(&self, n: usize, trial: usize, attempt: u64) -> Placement {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((trial as u64) << 32) | attempt);
        (0..n)
            .map(|_| (0..self.d).map(|_| rng.gen_range(0..PRIME)).collect())
            .collect()
    }

    /// A placement for `trial` that keeps every row of `edges` full.
    fn usable_placement(&self, n: usize, edges: &[Edge], trial: usize) -> Placement {
        for attempt in 0..MAX_ATTEMPTS {
            let p = self.placement(n, trial, attempt);
            if degenerate_edge(&p, edges, self.d).is_none() {
                return p;
            }
        }
        unreachable!("{MAX_ATTEMPTS} consecutive degenerate placements")
    }

    /// Rank at one trial's placement.
    pub fn rank_at_trial(&self, n: usize, edges: &[Edge], trial: usize) -> usize {
        let p = self.usable_placement(n, edges, trial);
        let cols = n * self.d;
        let mut basis = EchelonBasis::new(cols);
        for &e in edges {
            basis.insert(row(&p, e, self.d, cols));
        }
        basis.rank()
    }

    /// Generic rank of the edge list on vertices `0..n`.
    pub fn rank_edges(&self, n: usize, edges: &[Edge]) -> usize {
        exec::map_indexed(self.trials, |t| self.rank_at_trial(n, edges, t))
            .into_iter()
            .max()
            .unwrap_or(0)
    }

    pub fn generic_rank(&self, g: &Graph) -> usize {
        self.rank_edges(g.n(), g.edges())
    }

    pub fn is_independent(&self, n: usize, edges: &[Edge]) -> bool {
        self.rank_edges(n, edges) == edges.len()
    }

    /// Whether `e` (an edge or any vertex pair) lies in the span of `s`.
    pub fn in_span(&self, n: usize, s: &[Edge], e: Edge) -> bool {
        let mut with = s.to_vec();
        with.push(e);
        self.rank_edges(n, &with) == self.rank_edges(n, s)
    }

    /// Extends the independent set `base` greedily by `pool` edges in
    /// canonical order. The result is a maximal independent subset of
    /// `base ∪ pool` containing `base`.
    pub fn extend_to_maximal_independent(
        &self,
        n: usize,
        base: &[Edge],
        pool: &[Edge],
    ) -> Result<Vec<Edge>> {
        let mut tracker = IndependenceTracker::new(self, n);
        for &e in base {
            if !tracker.try_add(e) {
                return Err(Error::input(format!("base set is dependent at {e}")));
            }
        }
        let mut pool = pool.to_vec();
        pool.sort_unstable();
        for e in pool {
            if !tracker.contains(e) {
                tracker.try_add(e);
            }
        }
        Ok(tracker.into_edges())
    }
}

/// An independent edge set grown one edge at a time, with one echelon basis
/// per trial. An edge is accepted when some trial finds its row independent,
/// which certifies generic independence; trials that disagree are marked
/// degenerate and no longer consulted.
#[derive(Clone, Debug)]
pub struct IndependenceTracker {
    d: usize,
    n: usize,
    placements: Vec<Placement>,
    bases: Vec<EchelonBasis>,
    live: Vec<bool>,
    edges: Vec<Edge>,
}

impl IndependenceTracker {
    pub fn new(oracle: &RankOracle, n: usize) -> Self {
        // all pairs must keep full rows, since span queries may use non-edges
        let placements: Vec<Placement> = (0..oracle.trials)
            .map(|t| {
                (0..MAX_ATTEMPTS)
                    .map(|a| oracle.placement(n, t, a))
                    .find(|p| distinct_coordinates(p, oracle.d))
                    .expect("degenerate placements exhausted")
            })
            .collect();
        IndependenceTracker {
            d: oracle.d,
            n,
            bases: vec![EchelonBasis::new(n * oracle.d); placements.len()],
            live: vec![true; placements.len()],
            placements,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    /// Trials still consistent with every accepted edge.
    pub fn live_trials(&self) -> usize {
        self.live.iter().filter(|&&x| x).count()
    }

    fn verdicts(&self, e: Edge) -> Vec<Option<bool>> {
        let cols = self.n * self.d;
        (0..self.bases.len())
            .map(|t| {
                self.live[t]
                    .then(|| !self.bases[t].contains(&row(&self.placements[t], e, self.d, cols)))
            })
            .collect()
    }

    /// True when `e` is generically in the span of the accepted edges.
    pub fn in_span(&self, e: Edge) -> bool {
        !self.verdicts(e).into_iter().flatten().any(|indep| indep)
    }

    /// Adds `e` if it keeps the set independent; reports whether it did.
    pub fn try_add(&mut self, e: Edge) -> bool {
        assert!(e.v() < self.n, "edge {e} outside the tracked vertex range");
        let verdicts = self.verdicts(e);
        if !verdicts.iter().flatten().any(|&indep| indep) {
            return false;
        }
        let cols = self.n * self.d;
        for (t, v) in verdicts.into_iter().enumerate() {
            match v {
                Some(true) => {
                    self.bases[t].insert(row(&self.placements[t], e, self.d, cols));
                }
                Some(false) => self.live[t] = false,
                None => {}
            }
        }
        self.edges.push(e);
        true
    }
}

fn distinct_coordinates(p: &Placement, d: usize) -> bool {
    (0..d).all(|c| {
        let mut xs: Vec<u64> = p.iter().map(|q| q[c]).collect();
        xs.sort_unstable();
        xs.windows(2).all(|w| w[0] != w[1])
    })
}

/// Note attached to reports that rely on the randomised oracle.
pub fn confidence_note(oracle: &RankOracle) -> String {
    format!(
        "generic rank estimated as the maximum over {} random placements mod {}; \
         each placement underestimates with probability at most deg/p",
        oracle.trials, PRIME
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, double_banana, double_banana_bar};

    fn oracle(d: usize) -> RankOracle {
        RankOracle::new(d, 2, 0xC0FFEE).unwrap()
    }

    #[test]
    fn matrix_shape() {
        let o = oracle(3);
        let p = o.placement(2, 0, 0);
        let m = build_matrix(2, &[Edge::new(0, 1)], &p, 3).unwrap();
        assert_eq!(m.rows.len(), 1);
        assert_eq!(m.rows[0].len(), 6);
        let row = &m.rows[0];
        for ((&x, &y), (&a, &b)) in row[..3].iter().zip(&row[3..]).zip(p[0].iter().zip(&p[1])) {
            assert_eq!(x, field::sub(a, b));
            assert_eq!(field::add(x, y), 0);
        }
        let tri = build_matrix(3, cycle(3).edges(), &oracle(2).placement(3, 0, 0), 2).unwrap();
        assert_eq!(tri.rank(), 3);
        assert!(
            build_matrix(4, &[], &p.iter().cycle().take(4).cloned().collect(), 3)
                .unwrap()
                .rows
                .is_empty()
        );
        let flat = vec![vec![1, 2, 3], vec![1, 5, 6]];
        assert_eq!(
            build_matrix(2, &[Edge::new(0, 1)], &flat, 3),
            Err(Edge::new(0, 1))
        );
    }

    #[test]
    fn placements_are_prefix_stable() {
        let o = oracle(3);
        let a = o.placement(5, 1, 0);
        let b = o.placement(9, 1, 0);
        assert_eq!(a[..], b[..5]);
        assert_ne!(o.placement(5, 0, 0), a);
    }

    #[test]
    fn ranks() {
        let o = oracle(3);
        assert_eq!(o.generic_rank(&complete(5)), 9);
        assert_eq!(o.generic_rank(&double_banana(false)), 17);
        assert_eq!(o.generic_rank(&double_banana_bar()), 18);
        assert!(!o.is_independent(8, double_banana(false).edges()));
        assert!(RankOracle::new(3, 1, 0).is_err());
    }

    #[test]
    fn span_and_extension() {
        let o = oracle(3);
        let k5 = complete(5);
        let e0 = Edge::new(0, 1);
        let rest: Vec<Edge> = k5.edges().iter().copied().filter(|&e| e != e0).collect();
        assert!(o.in_span(5, &rest, e0));
        assert!(!o.in_span(5, &[], e0));
        assert_eq!(
            o.extend_to_maximal_independent(5, &[], k5.edges())
                .unwrap()
                .len(),
            9
        );
        assert!(o
            .extend_to_maximal_independent(5, &[], &[])
            .unwrap()
            .is_empty());
        assert!(o.extend_to_maximal_independent(5, k5.edges(), &[]).is_err());
        let mut t = IndependenceTracker::new(&o, 5);
        for &e in &rest {
            assert!(t.try_add(e));
        }
        assert!(t.in_span(e0));
        assert!(!t.try_add(e0));
        assert_eq!(t.live_trials(), 2);
    }
}
