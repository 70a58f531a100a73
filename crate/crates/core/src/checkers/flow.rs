use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Dinic maximum flow with exact integer capacities.
pub(crate) struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<BigInt>,
    capacity: Vec<BigInt>,
    level: Vec<i64>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            residual: Vec::new(),
            capacity: Vec::new(),
            level: vec![-1; nodes],
            cursor: vec![0; nodes],
        }
    }

    /// Adds `u -> v` and returns the id of the forward arc.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: BigInt) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.residual.push(cap.clone());
        self.capacity.push(cap);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.residual.push(BigInt::zero());
        self.capacity.push(BigInt::zero());
        id
    }

    pub fn flow_on(&self, arc: usize) -> BigInt {
        &self.capacity[arc] - &self.residual[arc]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &arc in &self.head[u] {
                let v = self.to[arc];
                if self.level[v] < 0 && self.residual[arc].is_positive() {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, limit: &BigInt) -> BigInt {
        if u == t {
            return limit.clone();
        }
        while self.cursor[u] < self.head[u].len() {
            let arc = self.head[u][self.cursor[u]];
            let v = self.to[arc];
            if self.level[v] == self.level[u] + 1 && self.residual[arc].is_positive() {
                let push = if &self.residual[arc] < limit {
                    self.residual[arc].clone()
                } else {
                    limit.clone()
                };
                let pushed = self.dfs(v, t, &push);
                if pushed.is_positive() {
                    self.residual[arc] -= &pushed;
                    self.residual[arc ^ 1] += &pushed;
                    return pushed;
                }
            }
            self.cursor[u] += 1;
        }
        BigInt::zero()
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> BigInt {
        let limit: BigInt = self.capacity.iter().sum();
        let mut total = BigInt::zero();
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let pushed = self.dfs(s, t, &limit);
                if pushed.is_zero() {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network: the source side of
    /// a minimum cut once the flow is maximum.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &arc in &self.head[u] {
                let v = self.to[arc];
                if !seen[v] && self.residual[arc].is_positive() {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // CLRS example, max flow 23
        let mut net = FlowNetwork::new(6);
        for (u, v, c) in [
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
            net.add_edge(u, v, BigInt::from(c));
        }
        assert_eq!(net.max_flow(0, 5), BigInt::from(23));
        let side = net.residual_reachable(0);
        assert!(side[0] && !side[5]);
    }
}
