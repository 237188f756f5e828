//! Slack matrices, rectangle covers of their supports, and the resulting
//! bounds on extension complexity.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{hrep_generators, minimize_hrep, HRep, Polytope, VRep};
use crate::linalg;
use crate::rational::Rational;

/// Default node budget for the exact cover search.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Maximal rectangles enumerated before the exact search is abandoned.
const MAX_RECTANGLES: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackMatrix {
    pub entries: Vec<Vec<Rational>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl SlackMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    /// `true` where the entry is nonzero.
    pub fn support(&self) -> Vec<Vec<bool>> {
        self.entries.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect()
    }

    /// Drops column `j`.
    pub fn without_col(&self, j: usize) -> SlackMatrix {
        let mut out = self.clone();
        for r in out.entries.iter_mut() {
            r.remove(j);
        }
        out.col_labels.remove(j);
        out
    }
}

impl fmt::Display for SlackMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Renders a support pattern as a 0/1 grid.
pub fn support_grid(support: &[Vec<bool>]) -> String {
    let mut s = String::new();
    for row in support {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

/// `M_ij = b_i - a_i · v_j` over the inequalities of `h` and the points of `v`.
pub fn slack_matrix(h: &HRep, v: &VRep) -> Result<SlackMatrix> {
    if h.dim != v.dim {
        return Err(Error::input(format!("dimensions {} and {} differ", h.dim, v.dim)));
    }
    let mut entries = Vec::with_capacity(h.inequalities.len());
    for (i, r) in h.inequalities.iter().enumerate() {
        let mut row = Vec::with_capacity(v.len());
        for (j, p) in v.vertices.iter().enumerate() {
            let s = r.slack(p);
            if s.is_negative() {
                return Err(Error::NegativeSlack { row: i, col: j });
            }
            row.push(s);
        }
        entries.push(row);
    }
    Ok(SlackMatrix {
        entries,
        row_labels: h.inequalities.iter().map(|r| r.to_string()).collect(),
        col_labels: v.vertices.iter().map(|p| format_point(p)).collect(),
    })
}

fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// An all-ones combinatorial rectangle `rows × cols`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub lb: u64,
    pub ub: u64,
    /// A cover of size `ub`.
    pub cover: Vec<Rectangle>,
    /// Pairwise incompatible support cells, certifying `lb`.
    pub fooling_set: Vec<(usize, usize)>,
    /// Whether the exact search finished within budget.
    pub exact: bool,
}

impl CoverResult {
    pub fn exact_value(&self) -> Option<u64> {
        self.exact.then_some(self.ub)
    }
}

/// Rectangle covering number of the support of `m`.
pub fn rectangle_cover_number(m: &SlackMatrix, budget: u64) -> CoverResult {
    rectangle_cover_support(&m.support(), budget)
}

struct Support {
    rows: usize,
    cols: usize,
    row_sets: Vec<FixedBitSet>,
}

impl Support {
    fn new(s: &[Vec<bool>]) -> Self {
        let rows = s.len();
        let cols = s.first().map_or(0, Vec::len);
        let row_sets = s
            .iter()
            .map(|r| {
                let mut b = FixedBitSet::with_capacity(cols);
                for (j, &x) in r.iter().enumerate() {
                    b.set(j, x);
                }
                b
            })
            .collect();
        Support { rows, cols, row_sets }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.row_sets[i].contains(j)
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }

    /// Rows whose support contains `cols`.
    fn rows_containing(&self, cols: &FixedBitSet) -> Vec<usize> {
        (0..self.rows).filter(|&i| cols.is_subset(&self.row_sets[i])).collect()
    }

    fn cells_of(&self, rows: &[usize], cols: &FixedBitSet) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.rows * self.cols);
        for &i in rows {
            for j in cols.ones() {
                b.insert(self.cell(i, j));
            }
        }
        b
    }

    fn all_cells(&self) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in self.row_sets[i].ones() {
                b.insert(self.cell(i, j));
            }
        }
        b
    }

    fn rectangle(&self, rows: Vec<usize>, cols: &FixedBitSet) -> Rectangle {
        Rectangle { rows, cols: cols.ones().collect() }
    }

    fn col_closure(&self, j: usize) -> (Vec<usize>, FixedBitSet) {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| self.get(i, j)).collect();
        let mut cols = FixedBitSet::with_capacity(self.cols);
        cols.insert_range(..);
        for &i in &rows {
            cols.intersect_with(&self.row_sets[i]);
        }
        (rows, cols)
    }

    /// All maximal rectangles, or `None` if there are more than `limit`.
    fn maximal_rectangles(&self, limit: usize) -> Option<Vec<(Vec<usize>, FixedBitSet)>> {
        let mut closed: Vec<FixedBitSet> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for r in &self.row_sets {
            if r.count_ones(..) > 0 && seen.insert(r.clone()) {
                closed.push(r.clone());
            }
        }
        let mut k = 0;
        while k < closed.len() {
            for r in &self.row_sets {
                let mut c = closed[k].clone();
                c.intersect_with(r);
                if c.count_ones(..) > 0 && seen.insert(c.clone()) {
                    closed.push(c);
                    if closed.len() > limit {
                        return None;
                    }
                }
            }
            k += 1;
        }
        Some(closed.into_iter().map(|c| (self.rows_containing(&c), c)).collect())
    }

    fn greedy_cover(&self) -> Vec<Rectangle> {
        let mut uncovered = self.all_cells();
        let mut cover = Vec::new();
        while let Some(cell) = uncovered.ones().next() {
            let (i, j) = (cell / self.cols, cell % self.cols);
            let row_rect = (self.rows_containing(&self.row_sets[i]), self.row_sets[i].clone());
            let col_rect = self.col_closure(j);
            let gain = |(r, c): &(Vec<usize>, FixedBitSet)| {
                let mut cells = self.cells_of(r, c);
                cells.intersect_with(&uncovered);
                cells.count_ones(..)
            };
            let (rows, cols) = if gain(&col_rect) > gain(&row_rect) { col_rect } else { row_rect };
            uncovered.difference_with(&self.cells_of(&rows, &cols));
            cover.push(self.rectangle(rows, &cols));
        }
        let mut by_row: Vec<Rectangle> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for r in &self.row_sets {
            if r.count_ones(..) > 0 && seen.insert(r.clone()) {
                by_row.push(self.rectangle(self.rows_containing(r), r));
            }
        }
        let by_col: Vec<Rectangle> = (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| self.get(i, j)))
            .map(|j| {
                let (rows, cols) = self.col_closure(j);
                self.rectangle(rows, &cols)
            })
            .collect();
        [cover, by_row, by_col].into_iter().min_by_key(Vec::len).unwrap_or_default()
    }

    fn compatible(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        !self.get(a.0, b.1) || !self.get(b.0, a.1)
    }

    fn greedy_fooling_set(&self) -> Vec<(usize, usize)> {
        let mut cells: Vec<(usize, usize)> =
            (0..self.rows).flat_map(|i| self.row_sets[i].ones().map(move |j| (i, j))).collect();
        let row_deg: Vec<usize> = self.row_sets.iter().map(|r| r.count_ones(..)).collect();
        let mut col_deg = vec![0usize; self.cols];
        for r in &self.row_sets {
            for j in r.ones() {
                col_deg[j] += 1;
            }
        }
        let mut orders: Vec<Vec<(usize, usize)>> = vec![cells.clone()];
        cells.sort_by_key(|&(i, j)| (j, i));
        orders.push(cells.clone());
        cells.sort_by_key(|&(i, j)| (row_deg[i] + col_deg[j], i, j));
        orders.push(cells);
        orders
            .into_iter()
            .map(|order| {
                let mut chosen: Vec<(usize, usize)> = Vec::new();
                for c in order {
                    if chosen.iter().all(|&d| self.compatible(c, d)) {
                        chosen.push(c);
                    }
                }
                chosen
            })
            .max_by_key(Vec::len)
            .unwrap_or_default()
    }
}

struct Search<'a> {
    rects: &'a [FixedBitSet],
    /// Rectangles containing each cell, largest first.
    covering: Vec<Vec<usize>>,
    largest: usize,
    best: usize,
    best_cover: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl<'a> Search<'a> {
    fn new(rects: &'a [FixedBitSet], cells: usize, best: usize, budget: u64) -> Self {
        let mut covering = vec![Vec::new(); cells];
        for (k, r) in rects.iter().enumerate() {
            for c in r.ones() {
                covering[c].push(k);
            }
        }
        let sizes: Vec<usize> = rects.iter().map(|r| r.count_ones(..)).collect();
        for list in &mut covering {
            list.sort_by_key(|&k| std::cmp::Reverse(sizes[k]));
        }
        let largest = sizes.into_iter().max().unwrap_or(0);
        Search { rects, covering, largest, best, best_cover: Vec::new(), nodes: 0, budget, exhausted: false }
    }

    fn run(&mut self, uncovered: &FixedBitSet, chosen: &mut Vec<usize>) {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        let remaining = uncovered.count_ones(..);
        if remaining == 0 {
            if chosen.len() < self.best {
                self.best = chosen.len();
                self.best_cover = chosen.clone();
            }
            return;
        }
        if self.largest == 0 || chosen.len() + remaining.div_ceil(self.largest) >= self.best {
            return;
        }
        // Branch on the uncovered cell with the fewest covering rectangles.
        let cell = uncovered
            .ones()
            .min_by_key(|&c| self.covering[c].len())
            .expect("uncovered cell exists");
        let mut options: Vec<(usize, usize)> = self.covering[cell]
            .iter()
            .map(|&k| (self.rects[k].intersection(uncovered).count(), k))
            .collect();
        options.sort_by_key(|&(gain, k)| (std::cmp::Reverse(gain), k));
        for (_, k) in options {
            let mut next = uncovered.clone();
            next.difference_with(&self.rects[k]);
            chosen.push(k);
            self.run(&next, chosen);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Exact rectangle covering number of a 0/1 pattern within `budget`
/// search nodes; otherwise certified greedy and fooling-set bounds.
pub fn rectangle_cover_support(support: &[Vec<bool>], budget: u64) -> CoverResult {
    let s = Support::new(support);
    let fooling = s.greedy_fooling_set();
    let greedy = s.greedy_cover();
    let lb = fooling.len() as u64;
    if greedy.is_empty() {
        return CoverResult { lb: 0, ub: 0, cover: greedy, fooling_set: fooling, exact: true };
    }
    if lb == greedy.len() as u64 {
        return CoverResult { lb, ub: lb, cover: greedy, fooling_set: fooling, exact: true };
    }
    let limit = usize::try_from(budget).unwrap_or(usize::MAX).min(MAX_RECTANGLES);
    let Some(maximal) = s.maximal_rectangles(limit) else {
        return CoverResult { lb, ub: greedy.len() as u64, cover: greedy, fooling_set: fooling, exact: false };
    };
    let cells: Vec<FixedBitSet> = maximal.iter().map(|(r, c)| s.cells_of(r, c)).collect();
    let mut search = Search::new(&cells, s.rows * s.cols, greedy.len(), budget);
    search.run(&s.all_cells(), &mut Vec::new());
    let cover = if search.best_cover.is_empty() {
        greedy
    } else {
        search.best_cover.iter().map(|&k| s.rectangle(maximal[k].0.clone(), &maximal[k].1)).collect()
    };
    let ub = cover.len() as u64;
    let exact = !search.exhausted;
    CoverResult { lb: if exact { ub } else { lb }, ub, cover, fooling_set: fooling, exact }
}

/// Checks that `cover` consists of all-ones rectangles covering every
/// support cell and that `fooling` is a fooling set of support cells.
pub fn verify_cover(support: &[Vec<bool>], res: &CoverResult) -> bool {
    let s = Support::new(support);
    let mut covered = FixedBitSet::with_capacity(s.rows * s.cols);
    for r in &res.cover {
        for &i in &r.rows {
            for &j in &r.cols {
                if !s.get(i, j) {
                    return false;
                }
                covered.insert(s.cell(i, j));
            }
        }
    }
    let fooling_ok = res.fooling_set.iter().all(|&(i, j)| s.get(i, j))
        && res.fooling_set.iter().enumerate().all(|(k, &a)| {
            res.fooling_set[k + 1..].iter().all(|&b| s.compatible(a, b))
        });
    covered == s.all_cells()
        && res.cover.len() as u64 == res.ub
        && fooling_ok
        && res.fooling_set.len() as u64 <= res.lb
        && res.lb <= res.ub
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XcBounds {
    pub lb: u64,
    pub ub: u64,
    /// Whether the rectangle cover number itself was computed exactly.
    pub exact: bool,
    pub cover: Option<CoverResult>,
}

impl XcBounds {
    pub fn trivial() -> Self {
        XcBounds { lb: 0, ub: 0, exact: true, cover: None }
    }
}

/// Lower bound `max(rc, dim + 1)` and upper bound `min(#facets, #vertices)`.
pub fn xc_bounds(p: &Polytope, budget: Option<u64>) -> Result<XcBounds> {
    let m = p.minimal()?;
    let (Some(h), Some(v)) = (m.hrep(), m.vrep()) else {
        return Ok(XcBounds::trivial());
    };
    let facets = h.inequalities.len() as u64;
    let ub = facets.min(v.len() as u64);
    let aff = (p.dim() - h.equations.len()) as u64;
    if facets == 0 {
        return Ok(XcBounds { lb: 0, ub, exact: true, cover: None });
    }
    let slack = slack_matrix(h, v)?;
    let cover = rectangle_cover_number(&slack, budget.unwrap_or(DEFAULT_BUDGET));
    let lb = cover.lb.max(aff + 1).min(ub);
    Ok(XcBounds { lb, ub, exact: cover.exact, cover: Some(cover) })
}

/// Bounds for `{x : h}`, which may be unbounded. Unbounded systems use the
/// slack matrix over vertices and extreme rays and only the facet count as
/// an upper bound.
pub fn xc_bounds_hrep(h: &HRep, budget: Option<u64>) -> Result<XcBounds> {
    let g = hrep_generators(h)?;
    if g.vertices.is_empty() {
        return Ok(XcBounds::trivial());
    }
    if g.rays.is_empty() && g.lines.is_empty() {
        let v = VRep::new(h.dim, g.vertices)?;
        return xc_bounds(&Polytope::from_vrep(v), budget);
    }
    let mh = minimize_hrep(h)?;
    let ub = mh.inequalities.len() as u64;
    let mut entries = Vec::new();
    for r in &mh.inequalities {
        let mut row: Vec<Rational> = g.vertices.iter().map(|p| r.slack(p)).collect();
        row.extend(g.rays.iter().map(|d| -linalg::dot(&r.a, d)));
        entries.push(row);
    }
    let support: Vec<Vec<bool>> =
        entries.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect();
    if ub == 0 {
        return Ok(XcBounds { lb: 0, ub: 0, exact: true, cover: None });
    }
    let cover = rectangle_cover_support(&support, budget.unwrap_or(DEFAULT_BUDGET));
    Ok(XcBounds { lb: cover.lb.min(ub), ub, exact: cover.exact, cover: Some(cover) })
}
