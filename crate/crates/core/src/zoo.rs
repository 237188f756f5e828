//! Vertex enumeration for the combinatorial polytopes: matchings, tours,
//! stable sets, satisfying assignments, forests and the perfect/partial
//! matching pair polytope.
//!
//! Every generator returns 0/1 vectors. Edge coordinates follow the
//! lexicographic order of the edge list held by [`Graph`].

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::VRep;
use crate::rational::Rational;

/// Simple undirected graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Normalizes each pair to `(min, max)` and sorts; rejects loops,
    /// duplicates and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::input(format!("loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::input(format!("edge {u} {v} outside 1..={n}")));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate edge {} {}", w[0].0, w[0].1)));
        }
        Ok(Graph { n, edges: es })
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        Graph { n, edges }
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::new(n, (1..=n).map(|i| (i, i % n + 1))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i, i + 1))).expect("valid path")
    }

    pub fn empty(n: usize) -> Graph {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::new(a + b, (1..=a).flat_map(|i| (a + 1..=a + b).map(move |j| (i, j))))
            .expect("valid bipartite graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Coordinate (0-based) of edge `{u, v}`.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Neighbor lists indexed by vertex (index 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Coordinates of edges with both endpoints in `s` (a vertex mask,
    /// bit `v-1` for vertex `v`).
    pub fn induced_edges(&self, s: u64) -> Vec<usize> {
        (0..self.m())
            .filter(|&e| {
                let (u, v) = self.edges[e];
                s >> (u - 1) & 1 == 1 && s >> (v - 1) & 1 == 1
            })
            .collect()
    }

    /// Coordinates of edges with exactly one endpoint in `s`.
    pub fn cut_edges(&self, s: u64) -> Vec<usize> {
        (0..self.m())
            .filter(|&e| {
                let (u, v) = self.edges[e];
                (s >> (u - 1) & 1) != (s >> (v - 1) & 1)
            })
            .collect()
    }

    /// Two-coloring test by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut color = vec![u8::MAX; self.n + 1];
        for s in 1..=self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Subgraph induced by the vertices of `s`, relabeled in increasing order.
    pub fn induced_subgraph(&self, s: u64) -> Graph {
        let verts: Vec<usize> = (1..=self.n).filter(|&v| s >> (v - 1) & 1 == 1).collect();
        let pos = |v: usize| verts.iter().position(|&x| x == v).expect("member") + 1;
        let edges = self.induced_edges(s).into_iter().map(|e| {
            let (u, v) = self.edges[e];
            (pos(u), pos(v))
        });
        Graph::new(verts.len(), edges).expect("subgraph is simple")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {:?})", self.n, self.edges)
    }
}

/// Coordinate (0-based) of edge `{i, j}` of `K_n` in lexicographic order.
pub fn complete_edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    debug_assert!(1 <= i && j <= n && i < j);
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// CNF formula over variables `1..=num_vars`; literals are signed indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<CnfFormula> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::MalformedInput(format!(
                        "literal {l} outside 1..={num_vars}"
                    )));
                }
                if c.contains(&-l) {
                    return Err(Error::MalformedInput(format!(
                        "clause {c:?} contains a variable and its negation"
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| lit_value(l, assignment)))
    }

    /// Positive and negative occurrence counts per variable (index 0 unused).
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let mut occ = vec![(0, 0); self.num_vars + 1];
        for c in &self.clauses {
            for &l in c {
                let v = l.unsigned_abs() as usize;
                if l > 0 {
                    occ[v].0 += 1;
                } else {
                    occ[v].1 += 1;
                }
            }
        }
        occ
    }
}

fn lit_value(l: i32, assignment: &[bool]) -> bool {
    let v = assignment[l.unsigned_abs() as usize - 1];
    if l > 0 {
        v
    } else {
        !v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatchingVariant {
    All,
    Perfect,
    Induced,
    Maximal,
}

/// Enumeration limits. Exceeding one is a `SizeLimit` error, never a
/// silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Edge count for edge-subset enumerations and vertex count for
    /// vertex-subset enumerations.
    pub subset: usize,
    /// Largest `n` for tours.
    pub tours: usize,
    /// Largest variable count for satisfying assignments.
    pub sat_vars: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { subset: 24, tours: 8, sat_vars: 24 }
    }
}

fn check_cap(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::size_limit(what, size as u128, cap as u128));
    }
    Ok(())
}

fn indicator(len: usize, ones: impl IntoIterator<Item = usize>) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    for i in ones {
        v[i] = Rational::one();
    }
    v
}

fn to_vrep(dim: usize, sets: Vec<Vec<usize>>) -> VRep {
    VRep::new(dim, sets.into_iter().map(|s| indicator(dim, s)).collect()).expect("lengths agree")
}

/// All matchings of `g` as sorted lists of edge coordinates.
pub fn matchings(g: &Graph) -> Vec<Vec<usize>> {
    fn rec(g: &Graph, e: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if e == g.m() {
            out.push(cur.clone());
            return;
        }
        rec(g, e + 1, used, cur, out);
        let (u, v) = g.edges[e];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            cur.push(e);
            rec(g, e + 1, used, cur, out);
            cur.pop();
            used[u] = false;
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(g, 0, &mut vec![false; g.n + 1], &mut Vec::new(), &mut out);
    out
}

pub fn is_matching(g: &Graph, set: &[usize]) -> bool {
    let mut used = vec![false; g.n + 1];
    for &e in set {
        let (u, v) = g.edges[e];
        if used[u] || used[v] {
            return false;
        }
        used[u] = true;
        used[v] = true;
    }
    true
}

pub fn is_perfect_matching(g: &Graph, set: &[usize]) -> bool {
    is_matching(g, set) && 2 * set.len() == g.n
}

pub fn is_maximal_matching(g: &Graph, set: &[usize]) -> bool {
    if !is_matching(g, set) {
        return false;
    }
    let mut used = vec![false; g.n + 1];
    for &e in set {
        used[g.edges[e].0] = true;
        used[g.edges[e].1] = true;
    }
    g.edges.iter().all(|&(u, v)| used[u] || used[v])
}

pub fn is_induced_matching(g: &Graph, set: &[usize]) -> bool {
    if !is_matching(g, set) {
        return false;
    }
    set.iter().enumerate().all(|(i, &e)| {
        set[i + 1..].iter().all(|&f| {
            let (a, b) = g.edges[e];
            let (c, d) = g.edges[f];
            !(g.has_edge(a, c) || g.has_edge(a, d) || g.has_edge(b, c) || g.has_edge(b, d))
        })
    })
}

pub fn enumerate_matchings(g: &Graph, variant: MatchingVariant) -> Result<VRep> {
    enumerate_matchings_with(g, variant, &Caps::default())
}

pub fn enumerate_matchings_with(g: &Graph, variant: MatchingVariant, caps: &Caps) -> Result<VRep> {
    check_cap("matching enumeration edges", g.m(), caps.subset)?;
    let keep = |s: &Vec<usize>| match variant {
        MatchingVariant::All => true,
        MatchingVariant::Perfect => is_perfect_matching(g, s),
        MatchingVariant::Induced => is_induced_matching(g, s),
        MatchingVariant::Maximal => is_maximal_matching(g, s),
    };
    Ok(to_vrep(g.m(), matchings(g).into_iter().filter(keep).collect()))
}

/// Tours of `K_n`, each as the sorted list of its edge coordinates.
pub fn tours(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = vec![1];
    let mut used = vec![false; n + 1];
    used[1] = true;
    fn rec(n: usize, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if perm.len() == n {
            // Each cycle is listed once: second vertex below the last.
            if perm[1] < perm[n - 1] {
                let mut es: Vec<usize> =
                    (0..n).map(|i| complete_edge_index(n, perm[i], perm[(i + 1) % n])).collect();
                es.sort_unstable();
                out.push(es);
            }
            return;
        }
        for v in 2..=n {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                rec(n, perm, used, out);
                perm.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut perm, &mut used, &mut out);
    out
}

pub fn is_tour(n: usize, set: &[usize]) -> bool {
    let g = Graph::complete(n);
    if set.len() != n {
        return false;
    }
    let mut deg = vec![0; n + 1];
    for &e in set {
        deg[g.edges[e].0] += 1;
        deg[g.edges[e].1] += 1;
    }
    if deg[1..].iter().any(|&d| d != 2) {
        return false;
    }
    // Two-regular and connected means a Hamiltonian cycle.
    let mut uf = UnionFind::new(n + 1);
    for &e in set {
        uf.union(g.edges[e].0, g.edges[e].1);
    }
    (2..=n).all(|v| uf.find(v) == uf.find(1))
}

pub fn enumerate_tours(n: usize) -> Result<VRep> {
    enumerate_tours_with(n, &Caps::default())
}

pub fn enumerate_tours_with(n: usize, caps: &Caps) -> Result<VRep> {
    if n < 3 {
        return Err(Error::input(format!("tours need n >= 3, got {n}")));
    }
    check_cap("tour size", n, caps.tours)?;
    Ok(to_vrep(n * (n - 1) / 2, tours(n)))
}

pub fn is_stable(g: &Graph, set: &[usize]) -> bool {
    let mut inside = vec![false; g.n + 1];
    for &v in set {
        inside[v + 1] = true;
    }
    g.edges.iter().all(|&(u, v)| !(inside[u] && inside[v]))
}

/// Stable sets as sorted 0-based vertex coordinates.
pub fn stable_sets(g: &Graph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    fn rec(v: usize, n: usize, adj: &[Vec<usize>], blocked: &mut [u32], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v > n {
            out.push(cur.clone());
            return;
        }
        rec(v + 1, n, adj, blocked, cur, out);
        if blocked[v] == 0 {
            for &w in &adj[v] {
                blocked[w] += 1;
            }
            cur.push(v - 1);
            rec(v + 1, n, adj, blocked, cur, out);
            cur.pop();
            for &w in &adj[v] {
                blocked[w] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(1, g.n, &adj, &mut vec![0; g.n + 1], &mut Vec::new(), &mut out);
    out
}

pub fn enumerate_stable_sets(g: &Graph) -> Result<VRep> {
    enumerate_stable_sets_with(g, &Caps::default())
}

pub fn enumerate_stable_sets_with(g: &Graph, caps: &Caps) -> Result<VRep> {
    check_cap("stable set enumeration vertices", g.n, caps.subset)?;
    Ok(to_vrep(g.n, stable_sets(g)))
}

/// Satisfying assignments by backtracking with clause pruning.
pub fn satisfying_assignments(f: &CnfFormula) -> Vec<Vec<bool>> {
    let n = f.num_vars;
    // Clauses become checkable once their largest variable is assigned.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut empty_clause = false;
    for (i, c) in f.clauses.iter().enumerate() {
        match c.iter().map(|l| l.unsigned_abs() as usize).max() {
            Some(v) => due[v].push(i),
            None => empty_clause = true,
        }
    }
    if empty_clause {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![false; n];
    fn rec(k: usize, f: &CnfFormula, due: &[Vec<usize>], cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for val in [false, true] {
            cur[k] = val;
            let ok = due[k + 1]
                .iter()
                .all(|&ci| f.clauses[ci].iter().any(|&l| lit_value(l, cur)));
            if ok {
                rec(k + 1, f, due, cur, out);
            }
        }
        cur[k] = false;
    }
    rec(0, f, &due, &mut cur, &mut out);
    out
}

pub fn enumerate_sat(f: &CnfFormula) -> Result<VRep> {
    enumerate_sat_with(f, &Caps::default())
}

pub fn enumerate_sat_with(f: &CnfFormula, caps: &Caps) -> Result<VRep> {
    check_cap("satisfiability variables", f.num_vars, caps.sat_vars)?;
    let pts = satisfying_assignments(f)
        .into_iter()
        .map(|a| a.into_iter().map(|b| if b { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    VRep::new(f.num_vars, pts)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

pub fn is_forest(n: usize, set: &[usize]) -> bool {
    let g = Graph::complete(n);
    let mut uf = UnionFind::new(n + 1);
    set.iter().all(|&e| uf.union(g.edges[e].0, g.edges[e].1))
}

/// Acyclic edge sets of `K_n`.
pub fn forests(n: usize) -> Vec<Vec<usize>> {
    let g = Graph::complete(n);
    fn rec(g: &Graph, e: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if e == g.m() {
            out.push(cur.clone());
            return;
        }
        rec(g, e + 1, cur, out);
        cur.push(e);
        if is_forest(g.n, cur) {
            rec(g, e + 1, cur, out);
        }
        cur.pop();
    }
    let mut out = Vec::new();
    rec(&g, 0, &mut Vec::new(), &mut out);
    out
}

pub fn enumerate_forests(n: usize) -> Result<VRep> {
    enumerate_forests_with(n, &Caps::default())
}

pub fn enumerate_forests_with(n: usize, caps: &Caps) -> Result<VRep> {
    if n == 0 {
        return Err(Error::input("forests need n >= 1"));
    }
    let m = n * (n - 1) / 2;
    check_cap("forest enumeration edges", m, caps.subset)?;
    Ok(to_vrep(m, forests(n)))
}

/// Pairs `(M, M')` with `M` perfect, `M'` a matching edge-disjoint from
/// `M`, and `|M'| ≥ k` (or `= k` when `exact`). Coordinates are the `x`
/// block for `M` followed by the `y` block for `M'`.
pub fn enumerate_mpm(g: &Graph, k: usize, exact: bool) -> Result<VRep> {
    enumerate_mpm_with(g, k, exact, &Caps::default())
}

pub fn enumerate_mpm_with(g: &Graph, k: usize, exact: bool, caps: &Caps) -> Result<VRep> {
    check_cap("mpm enumeration edges", g.m(), caps.subset)?;
    let m = g.m();
    let all = matchings(g);
    let mut pts = Vec::new();
    for pm in all.iter().filter(|s| is_perfect_matching(g, s)) {
        for other in &all {
            let size_ok = if exact { other.len() == k } else { other.len() >= k };
            if size_ok && other.iter().all(|e| !pm.contains(e)) {
                let mut v = indicator(2 * m, pm.iter().copied());
                for &e in other {
                    v[m + e] = Rational::one();
                }
                pts.push(v);
            }
        }
    }
    VRep::new(2 * m, pts)
}
