//! Integral max-flow by shortest augmenting paths.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug)]
struct Arc {
    to: usize,
    cap: i64,
}

/// Directed network with residual arcs stored in pairs (`a`, `a ^ 1`).
#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Arc `u -> v` with capacity `cap`.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64) {
        self.adj[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.adj[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap: 0 });
    }

    /// Undirected edge: capacity `cap` in each direction.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) {
        self.adj[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.adj[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap });
    }

    /// Maximum `s`-`t` flow, stopping early once `limit` is reached. The
    /// network is consumed into its residual form.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: Option<i64>) -> i64 {
        if s == t {
            return limit.unwrap_or(i64::MAX);
        }
        let n = self.adj.len();
        let mut flow = 0;
        let mut pred = vec![usize::MAX; n];
        loop {
            if limit.is_some_and(|l| flow >= l) {
                return flow;
            }
            pred.fill(usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            'bfs: while let Some(x) = queue.pop_front() {
                for &a in &self.adj[x] {
                    let arc = self.arcs[a];
                    if arc.cap > 0 && arc.to != s && pred[arc.to] == usize::MAX {
                        pred[arc.to] = a;
                        if arc.to == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(arc.to);
                    }
                }
            }
            if !reached {
                return flow;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let a = pred[v];
                push = push.min(self.arcs[a].cap);
                v = self.arcs[a ^ 1].to;
            }
            if let Some(l) = limit {
                push = push.min(l - flow);
            }
            let mut v = t;
            while v != s {
                let a = pred[v];
                self.arcs[a].cap -= push;
                self.arcs[a ^ 1].cap += push;
                v = self.arcs[a ^ 1].to;
            }
            flow += push;
        }
    }
}

/// Max flow on a copy of `net`.
pub fn max_flow(net: &FlowNetwork, s: usize, t: usize) -> i64 {
    net.clone().max_flow(s, t, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cut() {
        let mut n = FlowNetwork::new(3);
        n.add_arc(0, 1, 5);
        n.add_arc(1, 2, 0);
        assert_eq!(max_flow(&n, 0, 2), 0);
    }

    #[test]
    fn ten_unit_arcs() {
        let mut n = FlowNetwork::new(12);
        for v in 1..=10 {
            n.add_arc(0, v, 1);
            n.add_arc(v, 11, 1);
        }
        assert_eq!(max_flow(&n, 0, 11), 10);
        assert_eq!(n.clone().max_flow(0, 11, Some(3)), 3);
    }

    #[test]
    fn undirected_edges_carry_both_ways() {
        let mut n = FlowNetwork::new(4);
        n.add_edge(0, 1, 2);
        n.add_edge(1, 2, 1);
        n.add_edge(2, 3, 2);
        n.add_edge(1, 3, 1);
        assert_eq!(max_flow(&n, 0, 3), 2);
        assert_eq!(max_flow(&n, 3, 0), 2);
    }

    #[test]
    fn classic_diamond() {
        let mut n = FlowNetwork::new(4);
        n.add_arc(0, 1, 3);
        n.add_arc(0, 2, 2);
        n.add_arc(1, 2, 1);
        n.add_arc(1, 3, 2);
        n.add_arc(2, 3, 3);
        assert_eq!(max_flow(&n, 0, 3), 5);
    }
}
