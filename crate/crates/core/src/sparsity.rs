//! Maxwell counts and the Maxwell-independence family of edge sets.
//!
//! Everything here is parametric in the dimension `d` with `l = d(d+1)/2`.
//! The central primitive is [`deficiency`]: the largest value of
//! `e(V') - d|V'| + l` over vertex sets `V' ⊇ {u,v}` with `|V'| ≥ d`. It is
//! computed exactly by a project-selection max-flow, one run per forced
//! `(d-2)`-subset of the remaining vertices. A graph is Maxwell-independent iff
//! every edge has deficiency `≤ 0`, and an edge is admissible for a
//! Maxwell-independent set iff its deficiency in the augmented set is `≤ 0`.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::flow::{FlowNetwork, FlowState, INF};
use crate::graph::{Edge, EdgeSubset, Graph, VertexSet};

/// `l = d(d+1)/2`.
pub fn l_of(d: usize) -> i64 {
    (d * (d + 1) / 2) as i64
}

/// `d·|V| - |E|`. `V` is the set of non-isolated vertices unless
/// `full_vertices` is set, in which case all `n` vertices count.
pub fn maxwell_count(g: &Graph, d: usize, full_vertices: bool) -> i64 {
    let nv = if full_vertices {
        g.n()
    } else {
        g.support().len()
    };
    (d * nv) as i64 - g.edge_count() as i64
}

/// Upper bound `d·k - l` on the edges of a Maxwell-independent set spanning
/// `k ≥ d` vertices. Smaller vertex sets fall under the clique exception and
/// get `k(k-1)/2`.
pub fn tight_size(k: usize, d: usize) -> i64 {
    if k < d {
        (k * k.saturating_sub(1) / 2) as i64
    } else {
        (d * k) as i64 - l_of(d)
    }
}

/// Largest Maxwell-count violation among vertex sets containing a pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deficiency {
    pub value: i64,
    /// The inclusion-maximal vertex set attaining `value`.
    pub witness: VertexSet,
}

/// Deficiency of the pair `(u,v)` in `g`. Returns `None` when `g` has fewer
/// than `d` vertices, so no set qualifies.
pub fn deficiency(g: &Graph, u: usize, v: usize, d: usize) -> Result<Option<Deficiency>> {
    check_pair(g.n(), u, v)?;
    Ok(pair_deficiency(g.n(), g.edges(), u, v, d, None))
}

fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    if u == v {
        return Err(Error::input(format!(
            "deficiency needs two distinct vertices, got {u} twice"
        )));
    }
    if u >= n || v >= n {
        return Err(Error::input(format!("pair ({u},{v}) outside 0..{n}")));
    }
    Ok(())
}

/// Calls `f` with every `k`-subset of `0..len` in lexicographic order. Stops
/// when `f` breaks.
fn for_each_combination(len: usize, k: usize, mut f: impl FnMut(&[usize]) -> ControlFlow<()>) {
    if k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx).is_break() {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + len - k) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Project-selection network for one pair `(u,v)`: source to edge nodes
/// (capacity 1), edge nodes to their endpoints (unbounded), vertices to sink
/// (capacity `d`). A forced vertex gets an unbounded arc from the source, so
/// with forced set `F` the max flow gives
/// `max_{V' ⊇ F} e(V') - d|V'| = |E| - flow`.
///
/// Vertices outside `{u,v}` that touch no edge only ever lower the count, so
/// the universe is the edge support plus `{u,v}`, padded with the smallest
/// other ids when it is still smaller than `d`.
struct PairSweep {
    net: FlowNetwork,
    force_arcs: Vec<usize>,
    universe: Vec<usize>,
    edge_count: usize,
    d: usize,
    pair_flow: i64,
    saved: Option<FlowState>,
}

impl PairSweep {
    fn new(n: usize, edges: &[Edge], u: usize, v: usize, d: usize) -> Option<Self> {
        if n < d {
            return None;
        }
        let mut local = vec![usize::MAX; n];
        let mut universe = Vec::new();
        let ends = [u, v]
            .into_iter()
            .chain(edges.iter().flat_map(|e| [e.u(), e.v()]));
        for x in ends {
            if local[x] == usize::MAX {
                local[x] = universe.len();
                universe.push(x);
            }
        }
        let mut pad = 0..n;
        while universe.len() < d {
            let x = pad.next().expect("n ≥ d");
            if local[x] == usize::MAX {
                local[x] = universe.len();
                universe.push(x);
            }
        }
        let m = edges.len();
        let mut net = FlowNetwork::new(2 + m + universe.len());
        for (i, e) in edges.iter().enumerate() {
            net.add_arc(0, 2 + i, 1);
            net.add_arc(2 + i, 2 + m + local[e.u()], INF);
            net.add_arc(2 + i, 2 + m + local[e.v()], INF);
        }
        for x in 0..universe.len() {
            net.add_arc(2 + m + x, 1, d as i64);
        }
        let force_arcs = (0..universe.len())
            .map(|x| net.add_arc(0, 2 + m + x, 0))
            .collect();
        Some(PairSweep {
            net,
            force_arcs,
            universe,
            edge_count: m,
            d,
            pair_flow: 0,
            saved: None,
        })
    }

    /// Inclusion-maximal maximiser of the last run: vertices that cannot
    /// reach the sink in the residual network.
    fn witness(&self) -> VertexSet {
        let reach = self.net.reaches_sink(1);
        (0..self.universe.len())
            .filter(|&x| !reach[2 + self.edge_count + x])
            .map(|x| self.universe[x])
            .collect()
    }

    /// Forces `u,v` and returns `max e(V') - d|V'| + l` over all `V' ⊇ {u,v}`,
    /// small sets included. Later forced runs augment from this flow.
    fn pair_run(&mut self) -> i64 {
        for &x in &self.force_arcs[..2] {
            self.net.raise_capacity(x, INF);
        }
        self.pair_flow = self.net.max_flow(0, 1);
        self.saved = Some(self.net.save());
        self.value(self.pair_flow)
    }

    fn value(&self, flow: i64) -> i64 {
        self.edge_count as i64 - flow + l_of(self.d)
    }

    /// Forces `{u,v} ∪ W` for `W` given as indices into the universe past
    /// `u,v`. Forcing `W` raises the cut by at most `d|W|`, so augmenting
    /// from the saved pair flow stays cheap.
    fn forced_run(&mut self, combo: &[usize]) -> i64 {
        let saved = self.saved.as_ref().expect("pair_run comes first");
        self.net.load(saved);
        for &c in combo {
            self.net.raise_capacity(self.force_arcs[c + 2], INF);
        }
        let flow = self.pair_flow + self.net.max_flow(0, 1);
        self.value(flow)
    }

    fn forced_count(&self) -> usize {
        self.d.max(2) - 2
    }

    fn others(&self) -> usize {
        self.universe.len() - 2
    }
}

/// Flow-based deficiency over the edge list `edges` on vertices `0..n`. Among
/// runs attaining the maximum the largest witness wins. With `stop_above` the
/// sweep returns as soon as some run exceeds it.
///
/// The pair run alone settles it when its largest maximiser has at least `d`
/// vertices; only otherwise are the `(d-2)`-subsets swept.
pub(crate) fn pair_deficiency(
    n: usize,
    edges: &[Edge],
    u: usize,
    v: usize,
    d: usize,
    stop_above: Option<i64>,
) -> Option<Deficiency> {
    let mut sweep = PairSweep::new(n, edges, u, v, d)?;
    let top = sweep.pair_run();
    let witness = sweep.witness();
    if witness.len() >= d {
        return Some(Deficiency {
            value: top,
            witness,
        });
    }
    let mut best: Option<Deficiency> = None;
    let (others, k) = (sweep.others(), sweep.forced_count());
    for_each_combination(others, k, |combo| {
        let value = sweep.forced_run(combo);
        let current = best.as_ref().map(|b| (b.value, b.witness.len()));
        if current.is_none_or(|(bv, _)| value >= bv) {
            let witness = sweep.witness();
            if current.is_none_or(|(bv, bl)| value > bv || witness.len() > bl) {
                best = Some(Deficiency { value, witness });
            }
        }
        match stop_above {
            Some(limit) if value > limit => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    });
    best
}

/// For a Maxwell-independent edge list, the largest tight vertex set through
/// each forced set containing `(u,v)`, deduplicated.
///
/// Tight sets sharing at least `d` vertices have a tight union, so the
/// largest tight set through a forced set is unique, and forced sets inside
/// a closure already found lead back to that closure and are skipped.
pub(crate) fn tight_closures(
    n: usize,
    edges: &[Edge],
    u: usize,
    v: usize,
    d: usize,
) -> Vec<VertexSet> {
    let Some(mut sweep) = PairSweep::new(n, edges, u, v, d) else {
        return Vec::new();
    };
    let top = sweep.pair_run();
    let first = sweep.witness();
    if first.len() >= d {
        debug_assert!(top <= 0, "input is not Maxwell-independent");
        return if top == 0 { vec![first] } else { Vec::new() };
    }
    // Every set on at least d vertices scores below the pair run.
    if top - 1 < 0 {
        return Vec::new();
    }
    let mut out: Vec<VertexSet> = Vec::new();
    let (others, k) = (sweep.others(), sweep.forced_count());
    for_each_combination(others, k, |combo| {
        let ids: Vec<usize> = combo.iter().map(|&c| sweep.universe[c + 2]).collect();
        if out.iter().any(|t| ids.iter().all(|&x| t.contains(x))) {
            return ControlFlow::Continue(());
        }
        let value = sweep.forced_run(combo);
        debug_assert!(value <= 0, "input is not Maxwell-independent");
        if value == 0 {
            let w = sweep.witness();
            if !out.contains(&w) {
                out.push(w);
            }
        }
        ControlFlow::Continue(())
    });
    out
}

/// True when the pair's deficiency over `edges` is at most zero (or no vertex
/// set qualifies). Sets on `d` or more vertices that are not the pair run's
/// largest maximiser score at least one below it, which often decides the
/// question without the sweep (always for `d = 3`).
fn pair_ok(n: usize, edges: &[Edge], u: usize, v: usize, d: usize) -> bool {
    let Some(mut sweep) = PairSweep::new(n, edges, u, v, d) else {
        return true;
    };
    let top = sweep.pair_run();
    if sweep.witness().len() >= d {
        return top <= 0;
    }
    if top - 1 <= 0 {
        return true;
    }
    let (others, k) = (sweep.others(), sweep.forced_count());
    let mut ok = true;
    for_each_combination(others, k, |combo| {
        if sweep.forced_run(combo) > 0 {
            ok = false;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    ok
}

/// An edge whose deficiency is positive, with the offending vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub edge: Edge,
    pub deficiency: Deficiency,
}

/// First edge (in canonical order) with positive deficiency, if any.
pub fn maxwell_violation(g: &Graph, d: usize) -> Option<Violation> {
    let edges = g.edges();
    exec::find_first(edges.len(), |i| {
        let e = edges[i];
        pair_deficiency(g.n(), edges, e.u(), e.v(), d, Some(0))
            .filter(|x| x.value > 0)
            .map(|_| {
                let deficiency = pair_deficiency(g.n(), edges, e.u(), e.v(), d, None)
                    .expect("a violation implies a qualifying set");
                Violation {
                    edge: e,
                    deficiency,
                }
            })
    })
    .map(|(_, v)| v)
}

pub fn is_maxwell_independent(g: &Graph, d: usize) -> bool {
    let edges = g.edges();
    exec::all_indexed(edges.len(), |i| {
        pair_ok(g.n(), edges, edges[i].u(), edges[i].v(), d)
    })
}

/// Whether `m ∪ {e}` stays Maxwell-independent, assuming `m` is.
pub fn edge_admissible(m: &EdgeSubset<'_>, e: Edge, d: usize) -> Result<bool> {
    if m.graph().edge_index(e).is_none() {
        return Err(Error::input(format!(
            "{e} is not an edge of the parent graph"
        )));
    }
    if m.contains(e) {
        return Err(Error::input(format!("{e} is already in the set")));
    }
    let mut edges = m.to_vec();
    edges.push(e);
    Ok(pair_ok(m.graph().n(), &edges, e.u(), e.v(), d))
}

fn edges_of(g: &Graph, idx: &[usize]) -> Vec<Edge> {
    idx.iter().map(|&i| g.edge(i)).collect()
}

fn index_admissible(g: &Graph, set: &[usize], e: usize, d: usize) -> bool {
    let mut edges = edges_of(g, set);
    let x = g.edge(e);
    edges.push(x);
    pair_ok(g.n(), &edges, x.u(), x.v(), d)
}

/// Greedy maximal Maxwell-independent set scanning edges in `order` (edge
/// indices of `g`). Fails if `order` is not a permutation, or if the result
/// is not maximal on re-check.
pub fn maximal_maxwell_independent<'g>(
    g: &'g Graph,
    d: usize,
    order: &[usize],
) -> Result<EdgeSubset<'g>> {
    let mut seen = vec![false; g.edge_count()];
    for &i in order {
        if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::input("edge order is not a permutation of the edges"));
        }
    }
    if order.len() != g.edge_count() {
        return Err(Error::input("edge order is not a permutation of the edges"));
    }
    let chosen = greedy_indices(g, d, order);
    let set = EdgeSubset::from_indices(g, chosen.iter().copied());
    let members = set.to_vec();
    for e in g.edges() {
        if !set.contains(*e) {
            let mut with = members.clone();
            with.push(*e);
            if pair_ok(g.n(), &with, e.u(), e.v(), d) {
                return Err(Error::Internal(format!(
                    "greedy set is not maximal: {e} is still admissible"
                )));
            }
        }
    }
    Ok(set)
}

fn greedy_indices(g: &Graph, d: usize, order: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    for &i in order {
        let e = g.edge(i);
        edges.push(e);
        if pair_ok(g.n(), &edges, e.u(), e.v(), d) {
            chosen.push(i);
        } else {
            edges.pop();
        }
    }
    chosen
}

/// Lexicographic greedy maximal Maxwell-independent set.
pub fn greedy_maximal<'g>(g: &'g Graph, d: usize) -> EdgeSubset<'g> {
    let order: Vec<usize> = (0..g.edge_count()).collect();
    EdgeSubset::from_indices(g, greedy_indices(g, d, &order))
}

/// Seeded uniform permutation of `0..m`.
pub fn random_order(m: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Outcome counters of a maximal-set enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumStats {
    pub visited: usize,
    /// The cap was reached before the search space was exhausted.
    pub truncated: bool,
    /// The visitor asked to stop.
    pub stopped: bool,
}

struct Enumerator<'a, F> {
    g: &'a Graph,
    d: usize,
    cap: Option<usize>,
    visit: F,
    stats: EnumStats,
}

impl<F: FnMut(&[usize]) -> ControlFlow<()>> Enumerator<'_, F> {
    fn done(&self) -> bool {
        self.stats.truncated || self.stats.stopped
    }

    /// `cur` holds the included edges, `excl` the excluded ones with a flag
    /// recording that they are already inadmissible against `cur` (and hence
    /// against every extension of it).
    fn rec(&mut self, i: usize, cur: &mut Vec<usize>, excl: &mut Vec<(usize, bool)>) {
        if self.done() {
            return;
        }
        let m = self.g.edge_count();
        if i == m {
            if self.cap.is_some_and(|c| self.stats.visited >= c) {
                self.stats.truncated = true;
                return;
            }
            self.stats.visited += 1;
            if (self.visit)(cur).is_break() {
                self.stats.stopped = true;
            }
            return;
        }
        let admissible = index_admissible(self.g, cur, i, self.d);
        if admissible {
            cur.push(i);
            self.rec(i + 1, cur, excl);
            cur.pop();
        }
        if self.done() {
            return;
        }
        let saved = excl.clone();
        excl.push((i, !admissible));
        if self.exclusion_viable(i + 1, cur, excl) {
            self.rec(i + 1, cur, excl);
        }
        *excl = saved;
    }

    /// After excluding up to position `next`, the edges still available are
    /// `cur ∪ next..m`. An excluded edge admissible against all of them stays
    /// admissible against every leaf below, so the branch holds no maximal set.
    fn exclusion_viable(&self, next: usize, cur: &[usize], excl: &mut [(usize, bool)]) -> bool {
        let g = self.g;
        let mut avail = edges_of(g, cur);
        avail.extend(g.edges()[next..].iter().copied());
        let base = edges_of(g, cur);
        for entry in excl.iter_mut().filter(|x| !x.1) {
            let e = g.edge(entry.0);
            let mut with = avail.clone();
            with.push(e);
            if pair_ok(g.n(), &with, e.u(), e.v(), self.d) {
                return false;
            }
            let mut with = base.clone();
            with.push(e);
            entry.1 = !pair_ok(g.n(), &with, e.u(), e.v(), self.d);
        }
        true
    }
}

/// Visits every maximal Maxwell-independent subset of `g` exactly once, as a
/// sorted list of edge indices, in lexicographic include-first order.
pub fn for_each_maximal(
    g: &Graph,
    d: usize,
    cap: Option<usize>,
    visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> EnumStats {
    let mut en = Enumerator {
        g,
        d,
        cap,
        visit,
        stats: EnumStats::default(),
    };
    en.rec(0, &mut Vec::new(), &mut Vec::new());
    en.stats
}

#[derive(Clone, Debug)]
pub struct Enumeration<'g> {
    pub sets: Vec<EdgeSubset<'g>>,
    pub truncated: bool,
}

/// All maximal Maxwell-independent subsets, up to `cap` of them.
pub fn enumerate_maximal_maxwell_independent(
    g: &Graph,
    d: usize,
    cap: Option<usize>,
) -> Enumeration<'_> {
    let mut sets = Vec::new();
    let stats = for_each_maximal(g, d, cap, |idx| {
        sets.push(EdgeSubset::from_indices(g, idx.iter().copied()));
        ControlFlow::Continue(())
    });
    Enumeration {
        sets,
        truncated: stats.truncated,
    }
}

const RANDOM_GREEDY_ROUNDS: u64 = 8;

/// A Maxwell-independent subset with `d·n - l` edges, if one exists. Such a
/// set necessarily spans all `n` vertices when `n ≥ d`.
///
/// Tries the lexicographic greedy order, then a few seeded random orders, and
/// finally an exhaustive include/exclude search limited to `|E| - target`
/// exclusions. Exponential in the worst case.
pub fn tight_spanning_subset(g: &Graph, d: usize) -> Option<Vec<Edge>> {
    let n = g.n();
    if n < d {
        return None;
    }
    let target = tight_size(n, d);
    let m = g.edge_count() as i64;
    if m < target || target < 0 {
        return None;
    }
    if n > d && (0..n).any(|v| g.degree(v) < d) {
        return None;
    }
    let target = target as usize;
    let mut orders = vec![(0..g.edge_count()).collect::<Vec<_>>()];
    orders.extend((0..RANDOM_GREEDY_ROUNDS).map(|s| random_order(g.edge_count(), s)));
    for order in &orders {
        let set = greedy_indices(g, d, order);
        if set.len() == target {
            return Some(edges_of(g, &set));
        }
    }
    let mut cur = Vec::new();
    let budget = g.edge_count() - target;
    exact_search(g, d, 0, target, budget, &mut cur).then(|| edges_of(g, &cur))
}

/// Depth-first search for a Maxwell-independent set of `target` edges using
/// at most `budget` more exclusions. On success `cur` holds the set.
fn exact_search(
    g: &Graph,
    d: usize,
    i: usize,
    target: usize,
    budget: usize,
    cur: &mut Vec<usize>,
) -> bool {
    if cur.len() == target {
        return true;
    }
    if i == g.edge_count() || cur.len() + (g.edge_count() - i) < target {
        return false;
    }
    if index_admissible(g, cur, i, d) {
        cur.push(i);
        if exact_search(g, d, i + 1, target, budget, cur) {
            return true;
        }
        cur.pop();
    }
    budget > 0 && exact_search(g, d, i + 1, target, budget - 1, cur)
}

/// Largest Maxwell-independent subset, found by branch and bound from a
/// greedy lower bound. Exponential in the worst case.
pub fn maximum_maxwell_independent(g: &Graph, d: usize) -> Vec<Edge> {
    let support = g.support().len();
    let cap = (tight_size(support, d).max(0) as usize).min(g.edge_count());
    let mut best = greedy_indices(g, d, &(0..g.edge_count()).collect::<Vec<_>>());
    for s in 0..RANDOM_GREEDY_ROUNDS {
        let set = greedy_indices(g, d, &random_order(g.edge_count(), s));
        if set.len() > best.len() {
            best = set;
        }
    }
    if best.len() < cap {
        let mut cur = Vec::new();
        branch_and_bound(g, d, 0, cap, &mut cur, &mut best);
    }
    edges_of(g, &best)
}

fn branch_and_bound(
    g: &Graph,
    d: usize,
    i: usize,
    cap: usize,
    cur: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if best.len() >= cap {
        return;
    }
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    if i == g.edge_count() || cur.len() + (g.edge_count() - i) <= best.len() {
        return;
    }
    if index_admissible(g, cur, i, d) {
        cur.push(i);
        branch_and_bound(g, d, i + 1, cap, cur, best);
        cur.pop();
    }
    branch_and_bound(g, d, i + 1, cap, cur, best);
}

/// Maxwell-rigidity of `g` on all of its `n` vertices. Graphs on at most
/// `d - 1` vertices are rigid exactly when they are cliques.
pub fn is_maxwell_rigid(g: &Graph, d: usize) -> bool {
    if g.n() < d {
        return g.is_clique(&g.all_vertices());
    }
    tight_spanning_subset(g, d).is_some()
}

/// Whether a Maxwell-independent edge set is tight on its own support, with
/// sets on fewer than `d` vertices required to be cliques.
pub fn is_tight_on_support(edges: &[Edge], d: usize) -> bool {
    let support: VertexSet = edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
    edges.len() as i64 == tight_size(support.len(), d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrongRigidity {
    Strong,
    /// A maximal Maxwell-independent set that is not tight on its support.
    NotStrong(Vec<Edge>),
    /// The enumeration cap was hit before a verdict.
    Indeterminate,
}

/// Strong Maxwell-rigidity: every maximal Maxwell-independent subset is tight
/// on its support. Backed by enumeration, so `cap` bounds the work.
pub fn is_strong_maxwell_rigid(g: &Graph, d: usize, cap: Option<usize>) -> StrongRigidity {
    let first = greedy_maximal(g, d).to_vec();
    if !is_tight_on_support(&first, d) {
        return StrongRigidity::NotStrong(first);
    }
    let mut bad = None;
    let stats = for_each_maximal(g, d, cap, |idx| {
        let edges = edges_of(g, idx);
        if is_tight_on_support(&edges, d) {
            ControlFlow::Continue(())
        } else {
            bad = Some(edges);
            ControlFlow::Break(())
        }
    });
    match bad {
        Some(edges) => StrongRigidity::NotStrong(edges),
        None if stats.truncated => StrongRigidity::Indeterminate,
        None => StrongRigidity::Strong,
    }
}
