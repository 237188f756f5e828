//! Exact max-flow, Gomory–Hu cut trees and minimum T-odd cuts on
//! undirected capacitated graphs with vertices `1..=n`.

use std::collections::VecDeque;

use crate::rational::Rational;

/// Undirected capacitated graph as a dense symmetric matrix (index 0 unused).
#[derive(Clone, Debug)]
pub struct Network {
    n: usize,
    cap: Vec<Vec<Rational>>,
}

impl Network {
    pub fn new(n: usize) -> Self {
        Network { n, cap: vec![vec![Rational::zero(); n + 1]; n + 1] }
    }

    /// Adds `c` to the capacity of `{u, v}` in both directions.
    pub fn add_edge(&mut self, u: usize, v: usize, c: &Rational) {
        assert!(u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n);
        self.cap[u][v] += c;
        self.cap[v][u] += c;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn capacity(&self, u: usize, v: usize) -> &Rational {
        &self.cap[u][v]
    }

    /// Capacity of the cut between `side` and its complement.
    pub fn cut_value(&self, side: &[bool]) -> Rational {
        let mut total = Rational::zero();
        for u in 1..=self.n {
            for v in 1..=self.n {
                if side[u] && !side[v] && !self.cap[u][v].is_zero() {
                    total += &self.cap[u][v];
                }
            }
        }
        total
    }

    /// Maximum `s`-`t` flow by shortest augmenting paths. Returns the value
    /// and the source side of a minimum cut (indexed by vertex).
    pub fn max_flow(&self, s: usize, t: usize) -> (Rational, Vec<bool>) {
        assert_ne!(s, t);
        let n = self.n;
        let mut res = self.cap.clone();
        let mut value = Rational::zero();
        loop {
            let mut prev = vec![usize::MAX; n + 1];
            prev[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for v in 1..=n {
                    if prev[v] == usize::MAX && res[u][v].is_positive() {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                let side = (0..=n).map(|v| v != 0 && prev[v] != usize::MAX).collect();
                return (value, side);
            }
            let mut bottleneck: Option<Rational> = None;
            let mut v = t;
            while v != s {
                let u = prev[v];
                if bottleneck.as_ref().is_none_or(|b| res[u][v] < *b) {
                    bottleneck = Some(res[u][v].clone());
                }
                v = u;
            }
            let b = bottleneck.expect("path has an edge");
            let mut v = t;
            while v != s {
                let u = prev[v];
                res[u][v] -= &b;
                res[v][u] += &b;
                v = u;
            }
            value += b;
        }
    }
}

/// Gomory–Hu cut tree: every pairwise minimum cut value is the smallest
/// capacity on the tree path, and each tree edge's `cut_set` is a minimum
/// cut between its endpoints.
#[derive(Clone, Debug)]
pub struct GomoryHuTree {
    pub n: usize,
    /// `(u, v, capacity)` for each of the `n - 1` tree edges.
    pub tree_edges: Vec<(usize, usize, Rational)>,
    /// Vertex side (containing `u`) obtained by deleting the tree edge.
    pub cut_sets: Vec<Vec<usize>>,
}

pub fn gomory_hu(net: &Network) -> GomoryHuTree {
    let n = net.n();
    let mut parent = vec![1usize; n + 1];
    let mut fl = vec![Rational::zero(); n + 1];
    for s in 2..=n {
        let t = parent[s];
        let (f, side) = net.max_flow(s, t);
        for i in 1..=n {
            if i != s && side[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        fl[s] = f.clone();
        if side[parent[t]] {
            parent[s] = parent[t];
            parent[t] = s;
            fl[s] = fl[t].clone();
            fl[t] = f;
        }
    }
    let tree_edges: Vec<(usize, usize, Rational)> =
        (2..=n).map(|s| (s, parent[s], fl[s].clone())).collect();
    let cut_sets = (0..tree_edges.len())
        .map(|k| {
            let mut adj = vec![Vec::new(); n + 1];
            for (j, (u, v, _)) in tree_edges.iter().enumerate() {
                if j != k {
                    adj[*u].push(*v);
                    adj[*v].push(*u);
                }
            }
            let start = tree_edges[k].0;
            let mut seen = vec![false; n + 1];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            (1..=n).filter(|&v| seen[v]).collect()
        })
        .collect();
    GomoryHuTree { n, tree_edges, cut_sets }
}

impl GomoryHuTree {
    /// Minimum `s`-`t` cut value read off the tree path.
    pub fn min_cut(&self, s: usize, t: usize) -> Rational {
        let mut best: Option<Rational> = None;
        for (k, (_, _, c)) in self.tree_edges.iter().enumerate() {
            let side = &self.cut_sets[k];
            if side.contains(&s) != side.contains(&t) && best.as_ref().is_none_or(|b| c < b) {
                best = Some(c.clone());
            }
        }
        best.expect("distinct vertices are separated by some tree edge")
    }

    /// Minimum cut over sets with an odd number of `terminals`, where the
    /// terminal count is even. Returns the value and the side as given by
    /// the tree.
    pub fn min_odd_cut(&self, terminals: &[bool]) -> Option<(Rational, Vec<usize>)> {
        let mut best: Option<(Rational, Vec<usize>)> = None;
        for (k, (_, _, c)) in self.tree_edges.iter().enumerate() {
            let side = &self.cut_sets[k];
            let odd = side.iter().filter(|&&v| terminals[v]).count() % 2 == 1;
            if odd && best.as_ref().is_none_or(|(b, _)| c < b) {
                best = Some((c.clone(), side.clone()));
            }
        }
        best
    }
}
