//! Dinic max-flow on a small dense-id network.
//!
//! Arcs are stored in pairs (`a`, `a ^ 1`) so the residual of the reverse arc
//! is always at hand. A flow state can be saved, capacities raised and the
//! flow augmented from there, which is how the deficiency oracle sweeps its
//! forced vertex sets without starting over.

use std::collections::VecDeque;

pub const INF: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    base: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

/// Capacities and flow of a [`FlowNetwork`] at one point in time.
#[derive(Clone, Debug)]
pub struct FlowState {
    cap: Vec<i64>,
    base: Vec<i64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            base: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.head.len()
    }

    /// Adds arc `a -> b` with capacity `c` and returns its id.
    pub fn add_arc(&mut self, a: usize, b: usize, c: i64) -> usize {
        let id = self.to.len();
        self.head[a].push(id);
        self.to.push(b);
        self.cap.push(c);
        self.base.push(c);
        self.head[b].push(id + 1);
        self.to.push(a);
        self.cap.push(0);
        self.base.push(0);
        id
    }

    /// Changes an arc's capacity. Takes effect at the next [`reset`](Self::reset).
    pub fn set_capacity(&mut self, arc: usize, c: i64) {
        self.base[arc] = c;
    }

    /// Raises an arc's capacity to `c` while keeping the current flow.
    pub fn raise_capacity(&mut self, arc: usize, c: i64) {
        let delta = c - self.base[arc];
        assert!(delta >= 0, "raise_capacity cannot lower a capacity");
        self.base[arc] = c;
        self.cap[arc] += delta;
    }

    pub fn save(&self) -> FlowState {
        FlowState {
            cap: self.cap.clone(),
            base: self.base.clone(),
        }
    }

    /// Restores capacities and flow from a state saved on this network.
    pub fn load(&mut self, state: &FlowState) {
        self.cap.copy_from_slice(&state.cap);
        self.base.copy_from_slice(&state.base);
    }

    /// Clears all flow.
    pub fn reset(&mut self) {
        self.cap.copy_from_slice(&self.base);
    }

    /// Flow currently carried by `arc`.
    pub fn flow(&self, arc: usize) -> i64 {
        self.base[arc] - self.cap[arc]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.head[x] {
                let y = self.to[a];
                if self.cap[a] > 0 && self.level[y] < 0 {
                    self.level[y] = self.level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, x: usize, t: usize, limit: i64) -> i64 {
        if x == t {
            return limit;
        }
        while self.iter[x] < self.head[x].len() {
            let a = self.head[x][self.iter[x]];
            let y = self.to[a];
            if self.cap[a] > 0 && self.level[y] == self.level[x] + 1 {
                let pushed = self.dfs(y, t, limit.min(self.cap[a]));
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[x] += 1;
        }
        0
    }

    /// Maximum `s`-`t` flow, continuing from the current flow state.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }

    /// Marks nodes that can still reach `t` in the residual network. After a
    /// max flow, the unmarked nodes form the largest minimum cut source side.
    pub fn reaches_sink(&self, t: usize) -> Vec<bool> {
        let mut mark = vec![false; self.node_count()];
        mark[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(y) = queue.pop_front() {
            for &a in &self.head[y] {
                // a: y -> x, so a ^ 1 is x -> y
                let x = self.to[a];
                if !mark[x] && self.cap[a ^ 1] > 0 {
                    mark[x] = true;
                    queue.push_back(x);
                }
            }
        }
        mark
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        // CLRS figure 26.1
        let mut f = FlowNetwork::new(6);
        for (a, b, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 3, 12),
            (2, 1, 4),
            (2, 4, 14),
            (3, 2, 9),
            (3, 5, 20),
            (4, 3, 7),
            (4, 5, 4),
        ] {
            f.add_arc(a, b, c);
        }
        assert_eq!(f.max_flow(0, 5), 23);
        let reach = f.reaches_sink(5);
        assert!(!reach[0]);
        f.reset();
        assert_eq!(f.max_flow(0, 5), 23);
    }

    #[test]
    fn capacity_changes_apply_after_reset() {
        let mut f = FlowNetwork::new(3);
        let a = f.add_arc(0, 1, 5);
        f.add_arc(1, 2, 3);
        assert_eq!(f.max_flow(0, 2), 3);
        assert_eq!(f.flow(a), 3);
        f.set_capacity(a, 1);
        f.reset();
        assert_eq!(f.max_flow(0, 2), 1);
    }

    #[test]
    fn raised_capacity_augments_from_saved_flow() {
        let mut f = FlowNetwork::new(4);
        let a = f.add_arc(0, 1, 2);
        let b = f.add_arc(0, 2, 0);
        f.add_arc(1, 3, 5);
        f.add_arc(2, 3, 4);
        assert_eq!(f.max_flow(0, 3), 2);
        let saved = f.save();
        f.raise_capacity(b, 3);
        assert_eq!(f.max_flow(0, 3), 3);
        assert_eq!(f.flow(a) + f.flow(b), 5);
        f.load(&saved);
        f.raise_capacity(a, 5);
        assert_eq!(f.max_flow(0, 3), 3);
    }
}
