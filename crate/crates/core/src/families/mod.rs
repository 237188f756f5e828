//! Valid-inequality families with enumeration and exact separation.
//!
//! Each family knows its rows symbolically ([`RowKind`]) so that callers can
//! audit which combinatorial constraint a row came from. `separate` is the
//! fast exact oracle; `separate_brute` scans the enumeration and returns the
//! most violated row, ties broken by enumeration order.

mod flow;

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{HRep, LinearInequality, Polytope};
use crate::linalg;
use crate::rational::Rational;
use crate::zoo::{complete_edge_index, Graph};

pub use flow::{gomory_hu, GomoryHuTree, Network};

/// Default ceiling on the number of rows `enumerate` may produce.
pub const DEFAULT_MAX_ROWS: u128 = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    /// `-x_e ≤ 0`
    Nonneg(usize),
    /// `x_e ≤ 1`
    Upper(usize),
    /// `x(δ(v)) ≤ 1`
    Degree(usize),
    /// `x(E(S)) ≤ (|S|-1)/2`
    OddSet(Vec<usize>),
    /// `x(E(S)) ≤ |S| - 1`
    Subtour(Vec<usize>),
    /// `x(δ(S)) ≥ 1` on the first block
    OddCut(Vec<usize>),
    /// `-y_e ≤ 0` on the second block
    YNonneg(usize),
    /// `y(δ(v)) ≤ 1` on the second block
    YDegree(usize),
    /// `y(E(S)) ≤ (|S|-1)/2` on the second block
    YOddSet(Vec<usize>),
    /// Row `i` of an explicit list.
    Explicit(usize),
}

impl RowKind {
    /// The vertex set of set-indexed rows.
    pub fn set(&self) -> Option<&[usize]> {
        match self {
            RowKind::OddSet(s) | RowKind::Subtour(s) | RowKind::OddCut(s) | RowKind::YOddSet(s) => {
                Some(s)
            }
            _ => None,
        }
    }
}

fn fmt_set(f: &mut fmt::Formatter<'_>, s: &[usize]) -> fmt::Result {
    write!(f, "{{")?;
    for (i, v) in s.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    write!(f, "}}")
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKind::Nonneg(e) => write!(f, "nonneg e{}", e + 1),
            RowKind::Upper(e) => write!(f, "upper e{}", e + 1),
            RowKind::Degree(v) => write!(f, "degree v{v}"),
            RowKind::OddSet(s) => {
                write!(f, "odd-set ")?;
                fmt_set(f, s)
            }
            RowKind::Subtour(s) => {
                write!(f, "subtour ")?;
                fmt_set(f, s)
            }
            RowKind::OddCut(s) => {
                write!(f, "odd-cut ")?;
                fmt_set(f, s)
            }
            RowKind::YNonneg(e) => write!(f, "y-nonneg e{}", e + 1),
            RowKind::YDegree(v) => write!(f, "y-degree v{v}"),
            RowKind::YOddSet(s) => {
                write!(f, "y-odd-set ")?;
                fmt_set(f, s)
            }
            RowKind::Explicit(i) => write!(f, "row {}", i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub kind: RowKind,
    pub row: LinearInequality,
}

impl FamilyRow {
    pub fn violation(&self, x: &[Rational]) -> Rational {
        -self.row.slack(x)
    }
}

pub trait InequalityFamily: Send + Sync {
    fn name(&self) -> &str;

    fn ambient_dim(&self) -> usize;

    /// Number of rows `enumerate` would produce.
    fn size(&self) -> u128;

    /// Upper bound on `size` accepted by `enumerate`.
    fn max_rows(&self) -> u128 {
        DEFAULT_MAX_ROWS
    }

    /// Every member of the family, in canonical order.
    fn enumerate(&self) -> Result<Vec<FamilyRow>> {
        let size = self.size();
        if size > self.max_rows() {
            return Err(Error::size_limit(
                format!("{} enumeration rows", self.name()),
                size,
                self.max_rows(),
            ));
        }
        Ok(self.enumerate_unchecked())
    }

    fn enumerate_unchecked(&self) -> Vec<FamilyRow>;

    /// A violated member, or `None` if `x` satisfies every member.
    fn separate(&self, x: &[Rational]) -> Option<FamilyRow>;

    /// A small subset of members used to start cutting-plane loops.
    fn seed_rows(&self) -> Vec<FamilyRow>;

    /// Most violated member by scanning the enumeration.
    fn separate_brute(&self, x: &[Rational]) -> Result<Option<FamilyRow>> {
        Ok(most_violated(self.enumerate()?, x))
    }
}

fn most_violated(rows: impl IntoIterator<Item = FamilyRow>, x: &[Rational]) -> Option<FamilyRow> {
    let mut best: Option<(Rational, FamilyRow)> = None;
    for r in rows {
        let v = r.violation(x);
        if v.is_positive() && best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, r));
        }
    }
    best.map(|(_, r)| r)
}

fn check_dim(x: &[Rational], d: usize) {
    assert_eq!(x.len(), d, "point dimension does not match the family");
}

pub(crate) fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub(crate) fn set_to_mask(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | 1 << (v - 1))
}

fn unit_row(dim: usize, offset: usize, coords: &[usize], sign: i64, b: Rational) -> LinearInequality {
    let mut a = linalg::zeros(dim);
    for &e in coords {
        a[offset + e] = Rational::from_int(sign);
    }
    LinearInequality::new(a, b)
}

fn half(k: usize) -> Rational {
    Rational::new(k as i64 - 1, 2)
}

/// Odd subsets of `{1..n}` with at least `min_size` vertices, in increasing
/// mask order.
fn odd_masks(n: usize, min_size: u32) -> impl Iterator<Item = u64> {
    assert!(n < 64, "vertex sets are limited to 63 vertices");
    (1u64..(1u64 << n)).filter(move |m| m.count_ones() % 2 == 1 && m.count_ones() >= min_size)
}

fn count_odd_subsets(n: usize, min_size: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 0..=n {
        if k % 2 == 1 && k >= min_size {
            total += binom;
        }
        binom = binom * (n - k) as u128 / (k + 1) as u128;
    }
    total
}

/// Edmonds' description of the matching polytope: box rows, degree rows,
/// and odd-set rows for every odd `S` with `|S| ≥ 3`.
#[derive(Clone, Debug)]
pub struct OddSetFamily {
    g: Graph,
    max_rows: u128,
}

pub fn odd_set_family(g: &Graph) -> OddSetFamily {
    OddSetFamily { g: g.clone(), max_rows: DEFAULT_MAX_ROWS }
}

impl OddSetFamily {
    pub fn with_max_rows(mut self, max_rows: u128) -> Self {
        self.max_rows = max_rows;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn odd_set_row(&self, s: &[usize]) -> FamilyRow {
        odd_set_row(&self.g, s, 0, false)
    }

    fn box_rows(&self) -> Vec<FamilyRow> {
        let m = self.g.m();
        (0..m)
            .flat_map(|e| {
                [
                    FamilyRow { kind: RowKind::Nonneg(e), row: unit_row(m, 0, &[e], -1, Rational::zero()) },
                    FamilyRow { kind: RowKind::Upper(e), row: unit_row(m, 0, &[e], 1, Rational::one()) },
                ]
            })
            .collect()
    }
}

fn degree_rows(g: &Graph, dim: usize, offset: usize, y_block: bool) -> Vec<FamilyRow> {
    (1..=g.n())
        .filter_map(|v| {
            let cut = g.cut_edges(1 << (v - 1));
            if cut.is_empty() {
                return None;
            }
            let kind = if y_block { RowKind::YDegree(v) } else { RowKind::Degree(v) };
            Some(FamilyRow { kind, row: unit_row(dim, offset, &cut, 1, Rational::one()) })
        })
        .collect()
}

fn non_isolated(g: &Graph) -> u128 {
    g.adjacency().iter().filter(|a| !a.is_empty()).count() as u128
}

fn odd_set_row(g: &Graph, s: &[usize], offset: usize, y_block: bool) -> FamilyRow {
    let dim = if y_block { 2 * g.m() } else { g.m() };
    let inside = g.induced_edges(set_to_mask(s));
    let kind = if y_block { RowKind::YOddSet(s.to_vec()) } else { RowKind::OddSet(s.to_vec()) };
    FamilyRow { kind, row: unit_row(dim, offset, &inside, 1, half(s.len())) }
}

/// Padberg–Rao: minimum odd cut in the graph augmented by a slack vertex.
/// Requires `0 ≤ x_e` and `x(δ(v)) ≤ 1`; returns a violated odd set.
fn padberg_rao_odd_set(g: &Graph, x: &[Rational]) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 {
        return None;
    }
    let dummy = n + 1;
    let mut net = Network::new(n + 1);
    let mut deg = vec![Rational::zero(); n + 1];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !x[e].is_zero() {
            net.add_edge(u, v, &x[e]);
            deg[u] += &x[e];
            deg[v] += &x[e];
        }
    }
    for (v, d) in deg.iter().enumerate().skip(1) {
        let s = Rational::one() - d;
        if !s.is_zero() {
            net.add_edge(v, dummy, &s);
        }
    }
    let mut terminals = vec![true; n + 2];
    terminals[0] = false;
    terminals[dummy] = n % 2 == 1;
    let tree = gomory_hu(&net);
    let (value, side) = tree.min_odd_cut(&terminals)?;
    if value >= Rational::one() {
        return None;
    }
    let set: Vec<usize> = if side.contains(&dummy) {
        (1..=n).filter(|v| !side.contains(v)).collect()
    } else {
        side
    };
    debug_assert!(set.len() % 2 == 1 && set.len() >= 3);
    Some(set)
}

impl InequalityFamily for OddSetFamily {
    fn name(&self) -> &str {
        "odd-set"
    }

    fn ambient_dim(&self) -> usize {
        self.g.m()
    }

    fn size(&self) -> u128 {
        2 * self.g.m() as u128 + non_isolated(&self.g) + count_odd_subsets(self.g.n(), 3)
    }

    fn max_rows(&self) -> u128 {
        self.max_rows
    }

    fn enumerate_unchecked(&self) -> Vec<FamilyRow> {
        let mut rows = self.box_rows();
        rows.extend(degree_rows(&self.g, self.g.m(), 0, false));
        rows.extend(odd_masks(self.g.n(), 3).map(|mask| self.odd_set_row(&mask_to_set(mask))));
        rows
    }

    fn separate(&self, x: &[Rational]) -> Option<FamilyRow> {
        check_dim(x, self.g.m());
        if let Some(r) = most_violated(self.box_rows(), x) {
            return Some(r);
        }
        if let Some(r) = most_violated(degree_rows(&self.g, self.g.m(), 0, false), x) {
            return Some(r);
        }
        padberg_rao_odd_set(&self.g, x).map(|s| self.odd_set_row(&s))
    }

    fn seed_rows(&self) -> Vec<FamilyRow> {
        let mut rows = self.box_rows();
        rows.extend(degree_rows(&self.g, self.g.m(), 0, false));
        rows
    }
}

/// Violated odd set of `g` at `x` by minimum odd cut, assuming the box and
/// degree rows hold.
pub fn odd_set_separate_fast(x: &[Rational], g: &Graph) -> Option<Vec<usize>> {
    check_dim(x, g.m());
    padberg_rao_odd_set(g, x)
}

/// Subtour elimination rows over `S ⊆ {1..n-1}` with `2 ≤ |S| ≤ n-1`, plus
/// nonnegativity, on the edge coordinates of `K_n`.
#[derive(Clone, Debug)]
pub struct SubtourFamily {
    n: usize,
    max_rows: u128,
}

pub fn subtour_family(n: usize) -> Result<SubtourFamily> {
    if n < 3 {
        return Err(Error::input(format!("subtour family needs n >= 3, got {n}")));
    }
    if n > 63 {
        return Err(Error::size_limit("subtour family vertices", n as u128, 63));
    }
    Ok(SubtourFamily { n, max_rows: DEFAULT_MAX_ROWS })
}

impl SubtourFamily {
    pub fn with_max_rows(mut self, max_rows: u128) -> Self {
        self.max_rows = max_rows;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn subtour_row(&self, s: &[usize]) -> FamilyRow {
        let m = self.m();
        let mut a = linalg::zeros(m);
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                a[complete_edge_index(self.n, u, v)] = Rational::one();
            }
        }
        FamilyRow {
            kind: RowKind::Subtour(s.to_vec()),
            row: LinearInequality::new(a, Rational::from(s.len() - 1)),
        }
    }

    fn nonneg_rows(&self) -> Vec<FamilyRow> {
        let m = self.m();
        (0..m)
            .map(|e| FamilyRow { kind: RowKind::Nonneg(e), row: unit_row(m, 0, &[e], -1, Rational::zero()) })
            .collect()
    }

    fn subtour_masks(&self) -> impl Iterator<Item = u64> {
        (1u64..(1u64 << (self.n - 1))).filter(|m| m.count_ones() >= 2)
    }

    /// Global minimum cut on the support graph; valid when every vertex has
    /// `x(δ(v)) = 2`, where a violated subtour row is a cut below 2.
    fn separate_by_min_cut(&self, x: &[Rational]) -> Option<FamilyRow> {
        let n = self.n;
        let mut net = Network::new(n);
        for i in 1..=n {
            for j in i + 1..=n {
                let c = &x[complete_edge_index(n, i, j)];
                if !c.is_zero() {
                    net.add_edge(i, j, c);
                }
            }
        }
        let tree = gomory_hu(&net);
        let (k, (_, _, value)) = tree
            .tree_edges
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .2.cmp(&b.1 .2).then(a.0.cmp(&b.0)))?;
        if *value >= Rational::from_int(2) {
            return None;
        }
        let side = &tree.cut_sets[k];
        let s: Vec<usize> = if side.contains(&n) {
            (1..=n).filter(|v| !side.contains(v)).collect()
        } else {
            side.clone()
        };
        Some(self.subtour_row(&s))
    }
}

impl InequalityFamily for SubtourFamily {
    fn name(&self) -> &str {
        "subtour"
    }

    fn ambient_dim(&self) -> usize {
        self.m()
    }

    fn size(&self) -> u128 {
        self.m() as u128 + (1u128 << (self.n - 1)) - self.n as u128
    }

    fn max_rows(&self) -> u128 {
        self.max_rows
    }

    fn enumerate_unchecked(&self) -> Vec<FamilyRow> {
        let mut rows = self.nonneg_rows();
        let mut sets: Vec<Vec<usize>> = self.subtour_masks().map(mask_to_set).collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        rows.extend(sets.iter().map(|s| self.subtour_row(s)));
        rows
    }

    fn separate(&self, x: &[Rational]) -> Option<FamilyRow> {
        check_dim(x, self.m());
        if let Some(r) = most_violated(self.nonneg_rows(), x) {
            return Some(r);
        }
        let n = self.n;
        let two = Rational::from_int(2);
        let on_degree = (1..=n).all(|v| {
            let d: Rational =
                (1..=n).filter(|&u| u != v).map(|u| &x[complete_edge_index(n, u, v)]).sum();
            d == two
        });
        if on_degree {
            return self.separate_by_min_cut(x);
        }
        most_violated(self.subtour_masks().map(|m| self.subtour_row(&mask_to_set(m))), x)
    }

    fn seed_rows(&self) -> Vec<FamilyRow> {
        self.nonneg_rows()
    }
}

/// Violated subtour set at `x`, or `None`.
pub fn subtour_separate(x: &[Rational], n: usize) -> Result<Option<Vec<usize>>> {
    let fam = subtour_family(n)?;
    Ok(fam.separate(x).and_then(|r| r.kind.set().map(<[usize]>::to_vec)))
}

/// Rows for the perfect-matching / matching pair polytope on coordinates
/// `(x, y)`: nonnegativity of both blocks, degree rows of `y`, odd-cut rows
/// `x(δ(S)) ≥ 1` for odd `S` (one representative per cut) and odd-set rows
/// of `y` for odd `|S| ≥ 3`.
#[derive(Clone, Debug)]
pub struct OddCutPmFamily {
    g: Graph,
    max_rows: u128,
}

pub fn oddcut_pm_family(g: &Graph) -> OddCutPmFamily {
    OddCutPmFamily { g: g.clone(), max_rows: DEFAULT_MAX_ROWS }
}

impl OddCutPmFamily {
    pub fn with_max_rows(mut self, max_rows: u128) -> Self {
        self.max_rows = max_rows;
        self
    }

    pub fn odd_cut_row(&self, s: &[usize]) -> FamilyRow {
        let m = self.g.m();
        let cut = self.g.cut_edges(set_to_mask(s));
        FamilyRow {
            kind: RowKind::OddCut(s.to_vec()),
            row: unit_row(2 * m, 0, &cut, -1, -Rational::one()),
        }
    }

    fn cut_masks(&self) -> impl Iterator<Item = u64> + '_ {
        let n = self.g.n();
        let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
        odd_masks(n, 1).filter(move |&m| {
            m != full && (n % 2 == 1 || m >> (n - 1) & 1 == 0)
        })
    }

    fn support_rows(&self) -> Vec<FamilyRow> {
        let m = self.g.m();
        let mut rows: Vec<FamilyRow> = (0..m)
            .map(|e| FamilyRow { kind: RowKind::Nonneg(e), row: unit_row(2 * m, 0, &[e], -1, Rational::zero()) })
            .collect();
        rows.extend((0..m).map(|e| FamilyRow {
            kind: RowKind::YNonneg(e),
            row: unit_row(2 * m, m, &[e], -1, Rational::zero()),
        }));
        rows.extend(degree_rows(&self.g, 2 * m, m, true));
        rows
    }
}

impl InequalityFamily for OddCutPmFamily {
    fn name(&self) -> &str {
        "odd-cut-pm"
    }

    fn ambient_dim(&self) -> usize {
        2 * self.g.m()
    }

    fn size(&self) -> u128 {
        let n = self.g.n();
        let cuts = if n.is_multiple_of(2) {
            count_odd_subsets(n.saturating_sub(1), 1)
        } else {
            count_odd_subsets(n, 1) - 1
        };
        2 * self.g.m() as u128 + non_isolated(&self.g) + cuts + count_odd_subsets(n, 3)
    }

    fn max_rows(&self) -> u128 {
        self.max_rows
    }

    fn enumerate_unchecked(&self) -> Vec<FamilyRow> {
        let mut rows = self.support_rows();
        rows.extend(self.cut_masks().map(|m| self.odd_cut_row(&mask_to_set(m))));
        rows.extend(odd_masks(self.g.n(), 3).map(|m| odd_set_row(&self.g, &mask_to_set(m), self.g.m(), true)));
        rows
    }

    fn separate(&self, x: &[Rational]) -> Option<FamilyRow> {
        let m = self.g.m();
        let n = self.g.n();
        check_dim(x, 2 * m);
        if let Some(r) = most_violated(self.support_rows(), x) {
            return Some(r);
        }
        let (xb, yb) = x.split_at(m);
        if n.is_multiple_of(2) && n > 0 {
            let mut net = Network::new(n);
            for (e, &(u, v)) in self.g.edges().iter().enumerate() {
                if !xb[e].is_zero() {
                    net.add_edge(u, v, &xb[e]);
                }
            }
            let mut terminals = vec![true; n + 1];
            terminals[0] = false;
            let tree = gomory_hu(&net);
            if let Some((value, side)) = tree.min_odd_cut(&terminals) {
                if value < Rational::one() {
                    let s: Vec<usize> = if side.contains(&n) {
                        (1..=n).filter(|v| !side.contains(v)).collect()
                    } else {
                        side
                    };
                    return Some(self.odd_cut_row(&s));
                }
            }
        } else if let Some(r) =
            most_violated(self.cut_masks().map(|mk| self.odd_cut_row(&mask_to_set(mk))), x)
        {
            return Some(r);
        }
        padberg_rao_odd_set(&self.g, yb).map(|s| odd_set_row(&self.g, &s, m, true))
    }

    fn seed_rows(&self) -> Vec<FamilyRow> {
        self.support_rows()
    }
}

/// `0 ≤ x_i ≤ 1` in every coordinate.
#[derive(Clone, Debug)]
pub struct BoxFamily {
    dim: usize,
}

pub fn box_family(dim: usize) -> BoxFamily {
    BoxFamily { dim }
}

impl InequalityFamily for BoxFamily {
    fn name(&self) -> &str {
        "box"
    }

    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn size(&self) -> u128 {
        2 * self.dim as u128
    }

    fn enumerate_unchecked(&self) -> Vec<FamilyRow> {
        (0..self.dim)
            .flat_map(|e| {
                [
                    FamilyRow { kind: RowKind::Nonneg(e), row: unit_row(self.dim, 0, &[e], -1, Rational::zero()) },
                    FamilyRow { kind: RowKind::Upper(e), row: unit_row(self.dim, 0, &[e], 1, Rational::one()) },
                ]
            })
            .collect()
    }

    fn separate(&self, x: &[Rational]) -> Option<FamilyRow> {
        check_dim(x, self.dim);
        most_violated(self.enumerate_unchecked(), x)
    }

    fn seed_rows(&self) -> Vec<FamilyRow> {
        self.enumerate_unchecked()
    }
}

/// An explicit finite list of rows, e.g. the full facet list of a polytope.
#[derive(Clone, Debug)]
pub struct ExplicitFamily {
    name: String,
    dim: usize,
    rows: Vec<LinearInequality>,
}

impl ExplicitFamily {
    pub fn new(name: impl Into<String>, dim: usize, rows: Vec<LinearInequality>) -> Result<Self> {
        HRep::from_inequalities(dim, rows.clone())?;
        Ok(ExplicitFamily { name: name.into(), dim, rows })
    }

    pub fn rows(&self) -> &[LinearInequality] {
        &self.rows
    }
}

/// The facet list of `q` as a family.
pub fn facets_family(q: &Polytope) -> Result<ExplicitFamily> {
    let h = q.minimal_hrep()?;
    ExplicitFamily::new("facets", q.dim(), h.inequalities)
}

impl InequalityFamily for ExplicitFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn size(&self) -> u128 {
        self.rows.len() as u128
    }

    fn max_rows(&self) -> u128 {
        u128::MAX
    }

    fn enumerate_unchecked(&self) -> Vec<FamilyRow> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| FamilyRow { kind: RowKind::Explicit(i), row: r.clone() })
            .collect()
    }

    fn separate(&self, x: &[Rational]) -> Option<FamilyRow> {
        check_dim(x, self.dim);
        most_violated(self.enumerate_unchecked(), x)
    }

    fn seed_rows(&self) -> Vec<FamilyRow> {
        self.enumerate_unchecked()
    }
}
