//! Dinic max-flow, used to solve the quota-constrained assignment inside
//! each detachment split.

pub struct Dinic {
    // adjacency: per node, indices into `to`/`cap`
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(nodes: usize) -> Dinic {
        Dinic {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds a directed edge and returns its id (the reverse edge is id ^ 1).
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.adj[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.adj[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        id
    }

    /// Flow currently on edge `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &id in &self.adj[v] {
                let w = self.to[id];
                if self.cap[id] > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] >= 0
    }

    /// One augmenting path in the level graph, found iteratively (paths in
    /// large residual networks get long enough to overflow a call stack).
    fn augment(&mut self, s: usize, t: usize) -> i64 {
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let pushed = path.iter().map(|&id| self.cap[id]).min().unwrap_or(0);
                for &id in &path {
                    self.cap[id] -= pushed;
                    self.cap[id ^ 1] += pushed;
                }
                return pushed;
            }
            if self.iter[v] < self.adj[v].len() {
                let id = self.adj[v][self.iter[v]];
                let w = self.to[id];
                if self.cap[id] > 0 && self.level[w] == self.level[v] + 1 {
                    path.push(id);
                    v = w;
                } else {
                    self.iter[v] += 1;
                }
            } else {
                self.level[v] = -1;
                match path.pop() {
                    Some(id) => {
                        let prev = self.to[id ^ 1];
                        self.iter[prev] += 1;
                        v = prev;
                    }
                    None => return 0,
                }
            }
        }
    }

    /// Greedy single-pass seeding along length-3 paths s -> a -> b -> t.
    /// Harmless in general; large speedup on the near-feasible bipartite
    /// instances the detacher produces.
    fn seed_bipartite(&mut self, s: usize, t: usize) -> i64 {
        // one forward arc into t per node, precomputed so the inner loop
        // never scans a high-degree adjacency list
        let mut to_sink: Vec<Option<usize>> = vec![None; self.adj.len()];
        for &rev in &self.adj[t] {
            to_sink[self.to[rev]] = Some(rev ^ 1);
        }
        let mut total = 0;
        let first_hops: Vec<usize> = self.adj[s].clone();
        for id in first_hops {
            let a = self.to[id];
            if self.cap[id] == 0 || a == t {
                continue;
            }
            let mut remaining = self.cap[id];
            let hops: Vec<usize> = self.adj[a].clone();
            for mid in hops {
                if remaining == 0 {
                    break;
                }
                let b = self.to[mid];
                if self.cap[mid] == 0 || b == s {
                    continue;
                }
                let last_arc = to_sink[b].filter(|&e| self.cap[e] > 0);
                if let Some(last) = last_arc {
                    let d = remaining.min(self.cap[mid]).min(self.cap[last]);
                    if d > 0 {
                        self.cap[id] -= d;
                        self.cap[id ^ 1] += d;
                        self.cap[mid] -= d;
                        self.cap[mid ^ 1] += d;
                        self.cap[last] -= d;
                        self.cap[last ^ 1] += d;
                        remaining -= d;
                        total += d;
                    }
                }
            }
        }
        total
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = self.seed_bipartite(s, t);
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.augment(s, t);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_max_flow() {
        let mut d = Dinic::new(4);
        d.add_edge(0, 1, 2);
        d.add_edge(0, 2, 1);
        d.add_edge(1, 2, 1);
        d.add_edge(1, 3, 1);
        d.add_edge(2, 3, 2);
        assert_eq!(d.max_flow(0, 3), 3);
    }

    #[test]
    fn bipartite_saturation() {
        // 3 left nodes each with supply 1, 2 right nodes with caps 2 and 1
        let mut d = Dinic::new(7);
        let (s, t) = (5, 6);
        for l in 0..3 {
            d.add_edge(s, l, 1);
        }
        d.add_edge(3, t, 2);
        d.add_edge(4, t, 1);
        d.add_edge(0, 3, 1);
        d.add_edge(1, 3, 1);
        d.add_edge(2, 3, 1);
        d.add_edge(2, 4, 1);
        assert_eq!(d.max_flow(s, t), 3);
    }
}
