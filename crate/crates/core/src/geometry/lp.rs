//! Exact linear programming.
//!
//! `maximize c·x  s.t.  A x ≤ b,  E x = e` with `x` free. The free variables
//! are eliminated up front: a maximal independent set of constraint rows
//! (equations first) is solved for the pivot coordinates of `x`, which
//! leaves a standard-form problem over the inequality slacks only. That
//! problem is solved by a dense two-phase tableau simplex with Bland's rule,
//! which cannot cycle. Every basic solution of the slack problem is a vertex
//! of the original polyhedron whenever the polyhedron has one.
//!
//! Optimal answers carry dual multipliers: `y ≥ 0` on the inequalities and
//! free `u` on the equations with `Aᵀy + Eᵀu = c` and `b·y + e·u = value`.

use crate::error::{Error, Result};
use crate::geometry::{HRep, LinearEquation, LinearInequality};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rational,
    pub point: Vector,
    /// One multiplier per inequality, all nonnegative.
    pub ineq_duals: Vector,
    /// One multiplier per equation.
    pub eq_duals: Vector,
}

#[derive(Clone, Debug)]
pub enum LpStatus {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpStatus {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpStatus::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Maximizes `c · x` over `{x : h}`.
pub fn lp_optimize(c: &[Rational], h: &HRep) -> Result<LpStatus> {
    h.check()?;
    if c.len() != h.dim {
        return Err(Error::input(format!(
            "objective of length {} in dimension {}",
            c.len(),
            h.dim
        )));
    }
    let ineqs: Vec<&LinearInequality> = h.inequalities.iter().collect();
    let eqs: Vec<&LinearEquation> = h.equations.iter().collect();
    Ok(maximize(h.dim, c, &ineqs, &eqs))
}

/// Checks an optimality certificate exactly.
pub fn certificate_holds(
    c: &[Rational],
    ineqs: &[&LinearInequality],
    eqs: &[&LinearEquation],
    sol: &LpSolution,
) -> bool {
    if sol.ineq_duals.iter().any(Rational::is_negative) {
        return false;
    }
    let mut combo = linalg::zeros(c.len());
    let mut bound = Rational::zero();
    for (r, y) in ineqs.iter().zip(&sol.ineq_duals) {
        linalg::axpy(&mut combo, y, &r.a);
        bound += y * &r.b;
    }
    for (r, u) in eqs.iter().zip(&sol.eq_duals) {
        linalg::axpy(&mut combo, u, &r.a);
        bound += u * &r.c;
    }
    combo == c
        && bound == sol.value
        && linalg::dot(c, &sol.point) == sol.value
        && ineqs.iter().all(|r| r.is_satisfied(&sol.point))
        && eqs.iter().all(|r| r.is_satisfied(&sol.point))
}

#[derive(Clone, Copy)]
enum RowId {
    Ineq(usize),
    Eq(usize),
}

pub(crate) fn maximize(
    dim: usize,
    c: &[Rational],
    ineqs: &[&LinearInequality],
    eqs: &[&LinearEquation],
) -> LpStatus {
    PreparedLp::new(dim, ineqs, eqs).solve(c)
}

/// A constraint system prepared for many objectives. The elimination of
/// the free variables and a feasible basis of the slack problem are
/// computed once; each objective then only runs phase two.
pub(crate) struct PreparedLp<'a> {
    dim: usize,
    ineqs: &'a [&'a LinearInequality],
    eqs: &'a [&'a LinearEquation],
    basis_rows: Vec<RowId>,
    pivot_cols: Vec<usize>,
    minv: Matrix,
    rhs_b: Vector,
    eq_basis: Vec<usize>,
    /// `(E_B E_Bᵀ)⁻¹ E_B`, mapping a residual objective to equation duals.
    eq_solve: Matrix,
    feasible: Option<Tableau>,
    warm: Option<Tableau>,
}

impl<'a> PreparedLp<'a> {
    pub(crate) fn new(dim: usize, ineqs: &'a [&'a LinearInequality], eqs: &'a [&'a LinearEquation]) -> Self {
        let row = |id: RowId| -> (&[Rational], &Rational) {
            match id {
                RowId::Ineq(i) => (&ineqs[i].a, &ineqs[i].b),
                RowId::Eq(i) => (&eqs[i].a, &eqs[i].c),
            }
        };

        // Independent row basis, equations first.
        let mut echelon: Vec<(usize, Vector)> = Vec::new();
        let mut basis_rows: Vec<RowId> = Vec::new();
        let mut in_basis_ineq = vec![false; ineqs.len()];
        let mut in_basis_eq = vec![false; eqs.len()];
        let candidates = (0..eqs.len()).map(RowId::Eq).chain((0..ineqs.len()).map(RowId::Ineq));
        for id in candidates {
            if basis_rows.len() == dim {
                break;
            }
            let mut v = row(id).0.to_vec();
            for (p, e) in &echelon {
                if !v[*p].is_zero() {
                    let f = -v[*p].clone();
                    linalg::axpy(&mut v, &f, e);
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                let inv = v[p].recip();
                echelon.push((p, linalg::scale(&v, &inv)));
                basis_rows.push(id);
                match id {
                    RowId::Ineq(i) => in_basis_ineq[i] = true,
                    RowId::Eq(i) => in_basis_eq[i] = true,
                }
            }
        }
        let rho = basis_rows.len();
        let pivot_cols: Vec<usize> = echelon.iter().map(|(p, _)| *p).collect();
        drop(echelon);

        let sub: Vec<Vector> = basis_rows
            .iter()
            .map(|&id| pivot_cols.iter().map(|&j| row(id).0[j].clone()).collect())
            .collect();
        let minv = linalg::inverse(&sub).expect("basis block is nonsingular");
        let rhs_b: Vector = basis_rows.iter().map(|&id| row(id).1.clone()).collect();

        // Standard form over the slacks z_j (j indexes inequalities).
        let n = ineqs.len();
        let mut g_rows: Vec<Vector> = Vec::new();
        let mut h: Vector = Vec::new();
        let nonbasis = (0..ineqs.len())
            .filter(|&i| !in_basis_ineq[i])
            .map(RowId::Ineq)
            .chain((0..eqs.len()).filter(|&i| !in_basis_eq[i]).map(RowId::Eq));
        for id in nonbasis {
            let (a, rhs) = row(id);
            let a_c: Vector = pivot_cols.iter().map(|&j| a[j].clone()).collect();
            let beta: Vector = (0..rho)
                .map(|t| {
                    let mut s = Rational::zero();
                    for u in 0..rho {
                        if !a_c[u].is_zero() && !minv[u][t].is_zero() {
                            s += &a_c[u] * &minv[u][t];
                        }
                    }
                    s
                })
                .collect();
            let alpha = linalg::dot(&beta, &rhs_b);
            let mut g = linalg::zeros(n);
            for (t, &bid) in basis_rows.iter().enumerate() {
                if let RowId::Ineq(j) = bid {
                    g[j] = -beta[t].clone();
                }
            }
            if let RowId::Ineq(i) = id {
                g[i] = Rational::one();
            }
            g_rows.push(g);
            h.push(rhs - alpha);
        }

        let eq_basis: Vec<usize> = basis_rows
            .iter()
            .filter_map(|&id| match id {
                RowId::Eq(i) => Some(i),
                RowId::Ineq(_) => None,
            })
            .collect();
        let eq_solve = if eq_basis.is_empty() {
            Vec::new()
        } else {
            let eb: Vec<&Vector> = eq_basis.iter().map(|&i| &eqs[i].a).collect();
            let gram: Matrix =
                eb.iter().map(|p| eb.iter().map(|q| linalg::dot(p, q)).collect()).collect();
            let ginv = linalg::inverse(&gram).expect("independent equations");
            (0..eb.len())
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            (0..eb.len())
                                .filter(|&k| !ginv[i][k].is_zero() && !eb[k][j].is_zero())
                                .map(|k| &ginv[i][k] * &eb[k][j])
                                .sum()
                        })
                        .collect()
                })
                .collect()
        };

        PreparedLp {
            dim,
            ineqs,
            eqs,
            basis_rows,
            pivot_cols,
            minv,
            rhs_b,
            eq_basis,
            eq_solve,
            feasible: phase_one(g_rows, h, n),
            warm: None,
        }
    }

    #[allow(dead_code)]
    pub(crate) fn is_feasible(&self) -> bool {
        self.feasible.is_some()
    }

    pub(crate) fn solve(&self, c: &[Rational]) -> LpStatus {
        match &self.feasible {
            Some(start) => self.solve_from(start.clone(), c).0,
            None => LpStatus::Infeasible,
        }
    }

    /// Like [`solve`](Self::solve) but starts from the final basis of the
    /// previous warm solve. Results depend on the order of calls.
    pub(crate) fn solve_warm(&mut self, c: &[Rational]) -> LpStatus {
        let Some(start) = self.warm.take().or_else(|| self.feasible.clone()) else {
            return LpStatus::Infeasible;
        };
        let (status, end) = self.solve_from(start, c);
        self.warm = end;
        status
    }

    fn solve_from(&self, start: Tableau, c: &[Rational]) -> (LpStatus, Option<Tableau>) {
        let (ineqs, eqs, dim) = (self.ineqs, self.eqs, self.dim);
        let rho = self.basis_rows.len();
        let row_a = |id: RowId| -> &[Rational] {
            match id {
                RowId::Ineq(i) => &ineqs[i].a,
                RowId::Eq(i) => &eqs[i].a,
            }
        };
        // gamma = c_C Minv
        let c_c: Vector = self.pivot_cols.iter().map(|&j| c[j].clone()).collect();
        let gamma: Vector = (0..rho)
            .map(|t| {
                (0..rho)
                    .filter(|&u| !c_c[u].is_zero() && !self.minv[u][t].is_zero())
                    .map(|u| &c_c[u] * &self.minv[u][t])
                    .sum()
            })
            .collect();
        let mut recon = linalg::zeros(dim);
        for (t, &id) in self.basis_rows.iter().enumerate() {
            if !gamma[t].is_zero() {
                linalg::axpy(&mut recon, &gamma[t], row_a(id));
            }
        }
        let c_in_rowspace = recon == c;
        let v0 = linalg::dot(&gamma, &self.rhs_b);
        let n = ineqs.len();
        let mut w = linalg::zeros(n);
        for (t, &bid) in self.basis_rows.iter().enumerate() {
            if let RowId::Ineq(j) = bid {
                w[j] = -gamma[t].clone();
            }
        }

        let (z, reduced, end) = match phase_two(start, &w) {
            Err(t) => return (LpStatus::Unbounded, Some(t)),
            Ok(r) => r,
        };
        if !c_in_rowspace {
            return (LpStatus::Unbounded, Some(end));
        }

        let s_b: Vector = self
            .basis_rows
            .iter()
            .map(|&id| match id {
                RowId::Ineq(j) => z[j].clone(),
                RowId::Eq(_) => Rational::zero(),
            })
            .collect();
        let rhs_minus: Vector = linalg::sub(&self.rhs_b, &s_b);
        let x_c = linalg::mat_vec(&self.minv, &rhs_minus);
        let mut point = linalg::zeros(dim);
        for (t, &j) in self.pivot_cols.iter().enumerate() {
            point[j] = x_c[t].clone();
        }
        let value = &v0 + linalg::dot(&w, &z);

        let ineq_duals = reduced;
        let mut resid = c.to_vec();
        for (r, y) in ineqs.iter().zip(&ineq_duals) {
            if !y.is_zero() {
                linalg::axpy(&mut resid, &-y, &r.a);
            }
        }
        let mut eq_duals = linalg::zeros(eqs.len());
        for (k, &i) in self.eq_basis.iter().enumerate() {
            eq_duals[i] = linalg::dot(&self.eq_solve[k], &resid);
        }
        let sol = LpSolution { value, point, ineq_duals, eq_duals };
        debug_assert!(certificate_holds(c, ineqs, eqs, &sol), "LP certificate");
        (LpStatus::Optimal(sol), Some(end))
    }
}

#[derive(Clone)]
struct Tableau {
    rows: Vec<Vector>,
    basis: Vec<usize>,
    /// Reduced costs followed by the objective value.
    obj: Vector,
    ncols: usize,
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 50;

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |target: &mut Vector| {
            if target[c].is_zero() {
                return;
            }
            let f = target[c].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                target[j] -= d;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Largest-coefficient pricing until a run of degenerate pivots, then
    /// Bland's rule to the end, which cannot cycle. Returns false on
    /// unboundedness.
    fn run(&mut self) -> bool {
        let rhs = self.ncols;
        let mut bland = false;
        let mut degenerate = 0;
        loop {
            let enter = if bland {
                (0..self.ncols).find(|&j| self.obj[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.ncols {
                    if self.obj[j].is_negative() && best.is_none_or(|b| self.obj[j] < self.obj[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(enter) = enter else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((leave, ratio)) = best else {
                return false;
            };
            if ratio.is_zero() {
                degenerate += 1;
                if degenerate > DEGENERATE_LIMIT {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(leave, enter);
        }
    }
}

/// Feasible basis of `G z = h, z ≥ 0` over `n` columns, or `None`.
fn phase_one(mut g: Vec<Vector>, mut h: Vector, n: usize) -> Option<Tableau> {
    let m = g.len();
    for i in 0..m {
        if h[i].is_negative() {
            h[i] = -&h[i];
            for x in g[i].iter_mut() {
                *x = -&*x;
            }
        }
    }
    // One artificial per row.
    let ncols = n + m;
    let rows: Vec<Vector> = g
        .into_iter()
        .zip(&h)
        .enumerate()
        .map(|(i, (mut r, hi))| {
            r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            r.push(hi.clone());
            r
        })
        .collect();
    let mut obj = linalg::zeros(ncols + 1);
    for r in &rows {
        for j in 0..n {
            if !r[j].is_zero() {
                obj[j] -= &r[j];
            }
        }
        obj[ncols] -= &r[ncols];
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), obj, ncols };
    let bounded = t.run();
    debug_assert!(bounded, "phase one is bounded");
    if t.obj[ncols].is_negative() {
        return None;
    }
    // Drive artificials out of the basis or drop their redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
                i += 1;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    for r in t.rows.iter_mut() {
        let rhs = r[ncols].clone();
        r.truncate(n);
        r.push(rhs);
    }
    t.ncols = n;
    t.obj = linalg::zeros(n + 1);
    Some(t)
}

/// `max w·z` from a feasible tableau, returning the optimum, the reduced
/// costs and the final tableau; on unboundedness the tableau is returned
/// as the error.
fn phase_two(mut t: Tableau, w: &[Rational]) -> std::result::Result<(Vector, Vector, Tableau), Tableau> {
    let n = t.ncols;
    let mut obj: Vector = w.iter().map(|x| -x).collect();
    obj.push(Rational::zero());
    for (r, &b) in t.rows.iter().zip(&t.basis) {
        if w[b].is_zero() {
            continue;
        }
        for j in 0..=n {
            if !r[j].is_zero() {
                obj[j] += &w[b] * &r[j];
            }
        }
    }
    t.obj = obj;
    if !t.run() {
        return Err(t);
    }
    let mut z = linalg::zeros(n);
    for (r, &b) in t.rows.iter().zip(&t.basis) {
        z[b] = r[n].clone();
    }
    let reduced = t.obj[..n].to_vec();
    Ok((z, reduced, t))
}
