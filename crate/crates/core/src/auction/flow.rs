//! Feasible flows with lower bounds on a small network (Edmonds–Karp on a
//! residual edge list). Used to pick an allocation out of the markets'
//! demand ranges once the auction stops.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
}

#[derive(Debug)]
pub(crate) struct BoundedNetwork {
    nodes: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    lower: Vec<i64>,
    balance: Vec<i64>,
}

impl BoundedNetwork {
    pub fn new(nodes: usize) -> Self {
        BoundedNetwork {
            nodes,
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes + 2],
            lower: Vec::new(),
            balance: vec![0; nodes + 2],
        }
    }

    /// Adds `u → v` carrying between `lo` and `hi` units; returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize, lo: i64, hi: i64) -> usize {
        debug_assert!(lo <= hi);
        let id = self.lower.len();
        self.push(u, v, hi - lo);
        self.lower.push(lo);
        self.balance[v] += lo;
        self.balance[u] -= lo;
        id
    }

    fn push(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to: v, cap });
        self.adj[u].push(id);
        self.edges.push(Edge { to: u, cap: 0 });
        self.adj[v].push(id + 1);
        id
    }

    /// Finds a circulation honoring all bounds. Returns the flow on every
    /// edge added through `add_edge`, in insertion order.
    pub fn solve(mut self) -> Option<Vec<i64>> {
        let user_edges = self.lower.len();
        let source = self.nodes;
        let sink = self.nodes + 1;
        let mut required = 0;
        for v in 0..self.nodes {
            let b = self.balance[v];
            if b > 0 {
                self.push(source, v, b);
                required += b;
            } else if b < 0 {
                self.push(v, sink, -b);
            }
        }
        if self.max_flow(source, sink) != required {
            return None;
        }
        Some(
            (0..user_edges)
                .map(|k| self.lower[k] + self.edges[2 * k + 1].cap)
                .collect(),
        )
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            let mut via = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[source] = true;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.edges[e].to;
                    if !seen[v] && self.edges[e].cap > 0 {
                        seen[v] = true;
                        via[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut bottleneck = i64::MAX;
            let mut v = sink;
            while v != source {
                let e = via[v];
                bottleneck = bottleneck.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = sink;
            while v != source {
                let e = via[v];
                self.edges[e].cap -= bottleneck;
                self.edges[e ^ 1].cap += bottleneck;
                v = self.edges[e ^ 1].to;
            }
            total += bottleneck;
        }
    }
}
