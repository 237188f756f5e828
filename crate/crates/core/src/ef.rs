//! Extended formulations in the normal form `E x + F y = g, y ≥ 0`.
//!
//! The size of a formulation is the number of its inequalities, which in
//! this normal form is the number `r` of lifted variables.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::lp::{maximize, PreparedLp};
use crate::geometry::{
    polar_dual, polytopes_equal, vrep_to_hrep, HRep, LinearEquation, LinearInequality, LpStatus,
    Polytope, VRep,
};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::Rational;
use crate::zoo::complete_edge_index;

/// Constant `C` with `size(martin_forest_ef(n)) ≤ C·n³`.
pub const MARTIN_SIZE_CONSTANT: usize = 3;

/// Largest `n` for which [`martin_forest_ef`] is validated against the
/// enumerated forests.
pub const MARTIN_VALIDATION_MAX_N: usize = 5;

/// Range of the random objective entries in [`ef_project`].
const PERTURB: i64 = 1 << 20;

/// New points collected before the hull in [`ef_project`] is recomputed.
const PROJECT_BATCH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedFormulation {
    pub name: String,
    d: usize,
    r: usize,
    e: Matrix,
    f: Matrix,
    g: Vector,
}

impl ExtendedFormulation {
    /// Builds `E x + F y = g, y ≥ 0`; every row of `E` has length `d` and
    /// every row of `F` length `r`.
    pub fn new(name: impl Into<String>, d: usize, r: usize, e: Matrix, f: Matrix, g: Vector) -> Result<Self> {
        if e.len() != g.len() || f.len() != g.len() {
            return Err(Error::input(format!(
                "row counts differ: E has {}, F has {}, g has {}",
                e.len(),
                f.len(),
                g.len()
            )));
        }
        if let Some(row) = e.iter().find(|row| row.len() != d) {
            return Err(Error::input(format!("E row of length {} with d = {d}", row.len())));
        }
        if let Some(row) = f.iter().find(|row| row.len() != r) {
            return Err(Error::input(format!("F row of length {} with r = {r}", row.len())));
        }
        Ok(ExtendedFormulation { name: name.into(), d, r, e, f, g })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rows(&self) -> usize {
        self.g.len()
    }

    pub fn e_mat(&self) -> &Matrix {
        &self.e
    }

    pub fn f_mat(&self) -> &Matrix {
        &self.f
    }

    pub fn g(&self) -> &Vector {
        &self.g
    }

    /// Number of inequalities, i.e. `r`.
    pub fn size(&self) -> usize {
        self.r
    }

    /// Whether `(x, y)` satisfies the lifted system.
    pub fn satisfied_by(&self, x: &[Rational], y: &[Rational]) -> bool {
        x.len() == self.d
            && y.len() == self.r
            && y.iter().all(|v| !v.is_negative())
            && (0..self.rows())
                .all(|i| linalg::dot(&self.e[i], x) + linalg::dot(&self.f[i], y) == self.g[i])
    }

    /// The lifted polyhedron in `R^{d + r}`.
    pub fn lifted_hrep(&self) -> HRep {
        let total = self.d + self.r;
        let inequalities = (0..self.r)
            .map(|k| {
                let mut a = linalg::zeros(total);
                a[self.d + k] = -Rational::one();
                LinearInequality::new(a, Rational::zero())
            })
            .collect();
        let equations = (0..self.rows())
            .map(|i| {
                let mut a = self.e[i].clone();
                a.extend(self.f[i].iter().cloned());
                LinearEquation::new(a, self.g[i].clone())
            })
            .collect();
        HRep { dim: total, inequalities, equations }
    }

    fn maximize(&self, lifted: &HRep, c: &[Rational]) -> LpStatus {
        let mut obj = c.to_vec();
        obj.resize(lifted.dim, Rational::zero());
        let ineqs: Vec<&LinearInequality> = lifted.inequalities.iter().collect();
        let eqs: Vec<&LinearEquation> = lifted.equations.iter().collect();
        maximize(lifted.dim, &obj, &ineqs, &eqs)
    }

    /// Recession cone of the lifted system is trivial (or the system is
    /// infeasible).
    pub fn lift_is_bounded(&self) -> bool {
        if linalg::rank(&self.e, self.d) < self.d {
            return false;
        }
        let mut h = self.lifted_hrep();
        for eq in h.equations.iter_mut() {
            eq.c = Rational::zero();
        }
        let mut a = linalg::zeros(h.dim);
        for v in &mut a[self.d..] {
            *v = Rational::one();
        }
        h.inequalities.push(LinearInequality::new(a.clone(), Rational::one()));
        match self.maximize(&h, &a) {
            LpStatus::Optimal(s) => s.value.is_zero(),
            _ => false,
        }
    }

    /// Maximum of `Σ y` over the lift, `None` when infeasible.
    fn max_lift_mass(&self) -> Option<Rational> {
        let h = self.lifted_hrep();
        let mut a = linalg::zeros(h.dim);
        for v in &mut a[self.d..] {
            *v = Rational::one();
        }
        match self.maximize(&h, &a) {
            LpStatus::Optimal(s) => Some(s.value),
            LpStatus::Infeasible => None,
            LpStatus::Unbounded => Some(Rational::one()),
        }
    }

    /// Moves the projection by `shift`.
    pub fn translated(&self, shift: &[Rational]) -> ExtendedFormulation {
        let g = (0..self.rows()).map(|i| &self.g[i] + linalg::dot(&self.e[i], shift)).collect();
        ExtendedFormulation { g, ..self.clone() }
    }
}

/// Slack lift `A x + s = b, C x = c, s ≥ 0`.
pub fn ef_from_hrep(h: &HRep) -> ExtendedFormulation {
    let m = h.inequalities.len();
    let mut e = Vec::with_capacity(m + h.equations.len());
    let mut f = Vec::with_capacity(m + h.equations.len());
    let mut g = Vec::with_capacity(m + h.equations.len());
    for (i, row) in h.inequalities.iter().enumerate() {
        e.push(row.a.clone());
        let mut s = linalg::zeros(m);
        s[i] = Rational::one();
        f.push(s);
        g.push(row.b.clone());
    }
    for eq in &h.equations {
        e.push(eq.a.clone());
        f.push(linalg::zeros(m));
        g.push(eq.c.clone());
    }
    ExtendedFormulation { name: "slack".into(), d: h.dim, r: m, e, f, g }
}

/// Convex-combination lift `x = Σ λ_j v_j, Σ λ_j = 1, λ ≥ 0`.
pub fn ef_from_vrep(v: &VRep) -> ExtendedFormulation {
    let (d, n) = (v.dim, v.len());
    let mut e = Vec::with_capacity(d + 1);
    let mut f = Vec::with_capacity(d + 1);
    let mut g = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row = linalg::zeros(d);
        row[i] = Rational::one();
        e.push(row);
        f.push(v.vertices.iter().map(|p| -&p[i]).collect());
        g.push(Rational::zero());
    }
    e.push(linalg::zeros(d));
    f.push(vec![Rational::one(); n]);
    g.push(Rational::one());
    ExtendedFormulation { name: "hull".into(), d, r: n, e, f, g }
}

/// Left inverse `L` of a full-column-rank `E` (so `L E = I`) together with
/// a basis `K` of the left kernel (`K E = 0`).
fn left_inverse(e: &Matrix, d: usize) -> (Matrix, Matrix) {
    let rows = e.len();
    let et = linalg::transpose(e, d);
    let ete: Matrix = (0..d)
        .map(|i| (0..d).map(|j| linalg::dot(&et[i], &et[j])).collect())
        .collect();
    let inv = linalg::inverse(&ete).expect("full column rank");
    let l: Matrix = (0..d)
        .map(|i| (0..rows).map(|k| (0..d).map(|j| &inv[i][j] * &et[j][k]).sum()).collect())
        .collect();
    let kernel = linalg::nullspace(&et, rows);
    (l, kernel)
}

/// Disjunctive formulation of `conv(P1 ∪ P2)`.
///
/// Each lift has trivial recession cone, so `E_i` has full column rank and
/// its copy `x_i` is a linear function of `y_i` and the mixing weight. The
/// weight is a single nonnegative variable: its other bound is implied by
/// the lift it scales unless that lift is a single point with `y = 0`, in
/// which case an explicit complementary variable is added.
pub fn balas_union(e1: &ExtendedFormulation, e2: &ExtendedFormulation) -> Result<ExtendedFormulation> {
    if e1.d != e2.d {
        return Err(Error::input(format!("dimensions {} and {} differ", e1.d, e2.d)));
    }
    let d = e1.d;
    for e in [e1, e2] {
        if !e.lift_is_bounded() {
            return Err(Error::UnboundedLift);
        }
    }
    let (Some(m1), Some(m2)) = (e1.max_lift_mass(), e2.max_lift_mass()) else {
        return Err(Error::EmptyInput);
    };
    // λ is the weight of P1. `need_lo`: λ ≥ 0 must be explicit.
    let need_lo = m1.is_zero();
    let need_hi = m2.is_zero();
    // λ = alpha + beta·μ (+ gamma·ν); lifted vars: y1, y2, μ, [ν].
    let (alpha, beta, extra) = match (need_lo, need_hi) {
        (false, true) => (Rational::one(), -Rational::one(), 1),
        (true, true) => (Rational::zero(), Rational::one(), 2),
        _ => (Rational::zero(), Rational::one(), 1),
    };
    let (r1, r2) = (e1.r, e2.r);
    let r = r1 + r2 + extra;
    let mu = r1 + r2;
    let (l1, k1) = left_inverse(&e1.e, d);
    let (l2, k2) = left_inverse(&e2.e, d);

    // Part i contributes w_i = λ_i g_i − F_i y_i with x_i = L_i w_i and K_i w_i = 0,
    // where λ_1 = λ and λ_2 = 1 − λ. Each w_i is affine in the lifted vars.
    let part = |g: &Vector, f: &Matrix, offset: usize, ri: usize, first: bool| -> (Matrix, Vector) {
        let (lam_const, lam_mu) = if first {
            (alpha.clone(), beta.clone())
        } else {
            (Rational::one() - &alpha, -beta.clone())
        };
        let mut coeffs = Vec::with_capacity(g.len());
        let mut consts = Vec::with_capacity(g.len());
        for (i, gi) in g.iter().enumerate() {
            let mut row = linalg::zeros(r);
            for k in 0..ri {
                row[offset + k] = -f[i][k].clone();
            }
            row[mu] = &lam_mu * gi;
            coeffs.push(row);
            consts.push(&lam_const * gi);
        }
        (coeffs, consts)
    };
    let (w1, c1) = part(&e1.g, &e1.f, 0, r1, true);
    let (w2, c2) = part(&e2.g, &e2.f, r1, r2, false);

    let mut e = Vec::new();
    let mut f = Vec::new();
    let mut g = Vec::new();
    // x − L1 w1 − L2 w2 = 0
    for i in 0..d {
        let mut erow = linalg::zeros(d);
        erow[i] = Rational::one();
        let mut frow = linalg::zeros(r);
        let mut rhs = Rational::zero();
        for (l, w, c) in [(&l1, &w1, &c1), (&l2, &w2, &c2)] {
            for k in 0..w.len() {
                if l[i][k].is_zero() {
                    continue;
                }
                linalg::axpy(&mut frow, &-l[i][k].clone(), &w[k]);
                rhs += &l[i][k] * &c[k];
            }
        }
        e.push(erow);
        f.push(frow);
        g.push(rhs);
    }
    // K_i w_i = 0
    for (kern, w, c) in [(&k1, &w1, &c1), (&k2, &w2, &c2)] {
        for krow in kern.iter() {
            let mut frow = linalg::zeros(r);
            let mut rhs = Rational::zero();
            for k in 0..w.len() {
                if krow[k].is_zero() {
                    continue;
                }
                linalg::axpy(&mut frow, &krow[k], &w[k]);
                rhs -= &krow[k] * &c[k];
            }
            if linalg::is_zero_vec(&frow) && rhs.is_zero() {
                continue;
            }
            e.push(linalg::zeros(d));
            f.push(frow);
            g.push(rhs);
        }
    }
    if extra == 2 {
        let mut frow = linalg::zeros(r);
        frow[mu] = Rational::one();
        frow[mu + 1] = Rational::one();
        e.push(linalg::zeros(d));
        f.push(frow);
        g.push(Rational::one());
    }
    Ok(ExtendedFormulation { name: "balas".into(), d, r, e, f, g })
}

/// Both systems stacked on a shared `x`.
pub fn intersect_concat(e1: &ExtendedFormulation, e2: &ExtendedFormulation) -> Result<ExtendedFormulation> {
    if e1.d != e2.d {
        return Err(Error::input(format!("dimensions {} and {} differ", e1.d, e2.d)));
    }
    let r = e1.r + e2.r;
    let mut e = Vec::new();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for (src, offset) in [(e1, 0), (e2, e1.r)] {
        for i in 0..src.rows() {
            e.push(src.e[i].clone());
            let mut row = linalg::zeros(r);
            row[offset..offset + src.r].clone_from_slice(&src.f[i]);
            f.push(row);
            g.push(src.g[i].clone());
        }
    }
    Ok(ExtendedFormulation { name: "concat".into(), d: e1.d, r, e, f, g })
}

/// Projection of the lifted system onto `x`.
///
/// Vertices are collected with the exact LP oracle: after fixing the affine
/// hull, every facet of the hull of the points found so far is tested by
/// maximizing its normal over the lift, and optimal points beyond it are
/// added until every facet is valid.
pub fn ef_project(e: &ExtendedFormulation) -> Result<Polytope> {
    let d = e.d;
    let lifted = e.lifted_hrep();
    let ineqs: Vec<&LinearInequality> = lifted.inequalities.iter().collect();
    let eqs: Vec<&LinearEquation> = lifted.equations.iter().collect();
    let mut lp = PreparedLp::new(lifted.dim, &ineqs, &eqs);
    let mut oracle = |c: &[Rational]| -> LpStatus {
        let mut obj = c.to_vec();
        obj.resize(lifted.dim, Rational::zero());
        lp.solve_warm(&obj)
    };
    let first = match oracle(&linalg::zeros(d)) {
        LpStatus::Optimal(s) => s.point[..d].to_vec(),
        LpStatus::Infeasible => return Ok(Polytope::empty(d)),
        LpStatus::Unbounded => unreachable!("zero objective"),
    };
    if !e.lift_is_bounded() {
        return Err(Error::UnboundedLift);
    }
    let mut oracle = |c: &[Rational]| -> Vector {
        match oracle(c) {
            LpStatus::Optimal(s) => s.point[..d].to_vec(),
            _ => unreachable!("feasible bounded lift"),
        }
    };

    let mut points = vec![first];
    'hull: loop {
        let diffs: Vec<Vector> = points[1..].iter().map(|p| linalg::sub(p, &points[0])).collect();
        for a in linalg::nullspace(&diffs, d) {
            let base = linalg::dot(&a, &points[0]);
            for c in [a.clone(), linalg::scale(&a, &-Rational::one())] {
                let x = oracle(&c);
                if linalg::dot(&a, &x) != base {
                    points.push(x);
                    continue 'hull;
                }
            }
        }
        break;
    }

    // Generic random directions have a unique optimal vertex, so they find
    // most vertices before any hull is built.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut random_dir = move || -> Vector {
        (0..d).map(|_| Rational::from_int(rng.gen_range(-PERTURB..=PERTURB))).collect()
    };
    let mut seen: BTreeSet<Vector> = points.iter().cloned().collect();
    let mut misses = 0;
    while points.len() > 1 && misses < 2 * d + 16 {
        let x = oracle(&random_dir());
        if seen.insert(x.clone()) {
            points.push(x);
            misses = 0;
        } else {
            misses += 1;
        }
    }

    // Facets of the current hull that are valid for the projection stay
    // facets of every later hull, so each is tested once.
    let mut confirmed: BTreeSet<LinearInequality> = BTreeSet::new();
    loop {
        let v = VRep::new(d, points.clone())?;
        if v.len() == 1 {
            break;
        }
        let h = vrep_to_hrep(&v)?;
        let mut added = 0;
        for row in &h.inequalities {
            if confirmed.contains(row) {
                continue;
            }
            let x = oracle(&row.a);
            if linalg::dot(&row.a, &x) > row.b {
                let scaled = linalg::scale(&row.a, &Rational::from_int(PERTURB * PERTURB));
                let y = oracle(&linalg::add(&scaled, &random_dir()));
                points.push(if linalg::dot(&row.a, &y) > row.b { y } else { x });
                added += 1;
                if added == PROJECT_BATCH {
                    break;
                }
            } else {
                confirmed.insert(row.clone());
            }
        }
        if added == 0 {
            break;
        }
    }
    Polytope::from_vrep(VRep::new(d, points)?).minimal()
}

/// Whether the projection of `e` equals `target`.
pub fn ef_validate(e: &ExtendedFormulation, target: &Polytope) -> Result<bool> {
    if e.d != target.dim() {
        return Err(Error::input(format!("dimensions {} and {} differ", e.d, target.dim())));
    }
    polytopes_equal(&ef_project(e)?, target)
}

/// Slack lift of the polar of the projection of `e` about `center`
/// (default: vertex barycenter), translated back to `center`. Its size is
/// the vertex count of the projection, so a polar round trip starting from
/// a facet lift keeps the size.
pub fn ef_polar(e: &ExtendedFormulation, center: Option<&[Rational]>) -> Result<ExtendedFormulation> {
    let p = ef_project(e)?;
    let polar = polar_dual(&p, center)?;
    let mut out = ef_from_hrep(polar.hrep().expect("polar is minimal"));
    out.name = "polar".into();
    Ok(out)
}

/// Stages of [`polar_route_intersection`] with their sizes.
#[derive(Clone, Debug)]
pub struct PolarRoute {
    pub center: Vector,
    /// Size of the hull lift of each polar.
    pub polar_sizes: (usize, usize),
    pub union_size: usize,
    pub formulation: ExtendedFormulation,
}

/// `P1 ∩ P2` through the polars: the intersection is the polar of
/// `conv(P1° ∪ P2°)`, which is formed by [`balas_union`] and polarized
/// back. Lower-dimensional intersections are handled inside their affine
/// hull and lifted back.
pub fn polar_route_intersection(p1: &Polytope, p2: &Polytope) -> Result<ExtendedFormulation> {
    Ok(polar_route_stages(p1, p2)?.formulation)
}

pub fn polar_route_stages(p1: &Polytope, p2: &Polytope) -> Result<PolarRoute> {
    if p1.dim() != p2.dim() {
        return Err(Error::input(format!("dimensions {} and {} differ", p1.dim(), p2.dim())));
    }
    let d = p1.dim();
    let (h1, h2) = match (p1.minimal_hrep(), p2.minimal_hrep()) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Err(Error::NotFullDim),
    };
    let both = HRep {
        dim: d,
        inequalities: h1.inequalities.iter().chain(&h2.inequalities).cloned().collect(),
        equations: h1.equations.iter().chain(&h2.equations).cloned().collect(),
    };
    let q = Polytope::from_hrep(both).minimal()?;
    let (Some(qh), Some(qv)) = (q.hrep(), q.vrep()) else {
        return Err(Error::NotFullDim);
    };
    if qv.is_empty() || qh.equations.len() == d {
        return Err(Error::NotFullDim);
    }
    let base = qv.vertices[0].clone();
    let normals: Matrix = qh.equations.iter().map(|eq| eq.a.clone()).collect();
    let basis: Matrix = if normals.is_empty() {
        (0..d)
            .map(|i| {
                let mut v = linalg::zeros(d);
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        linalg::nullspace(&normals, d)
    };
    let k = basis.len();
    // x = base + Bᵀ t; restrict each hrep to t-space.
    let restrict = |h: &HRep| -> Result<Polytope> {
        let map = |a: &[Rational]| -> Vector { basis.iter().map(|b| linalg::dot(a, b)).collect() };
        let inequalities = h
            .inequalities
            .iter()
            .map(|r| LinearInequality::new(map(&r.a), &r.b - linalg::dot(&r.a, &base)))
            .filter(|r| !r.is_trivial())
            .collect();
        let equations = h
            .equations
            .iter()
            .map(|r| LinearEquation::new(map(&r.a), &r.c - linalg::dot(&r.a, &base)))
            .filter(|r| !linalg::is_zero_vec(&r.a) || !r.c.is_zero())
            .collect();
        Ok(Polytope::from_hrep(HRep::new(k, inequalities, equations)?))
    };
    let (t1, t2) = (restrict(&h1)?, restrict(&h2)?);
    let to_t = |x: &[Rational]| -> Vector {
        let bt = linalg::transpose(&basis, d);
        linalg::solve_any(&bt, &linalg::sub(x, &base), k).expect("point in affine hull")
    };
    let tq: Vec<Vector> = qv.vertices.iter().map(|x| to_t(x)).collect();
    let center = crate::geometry::barycenter(&tq);

    let polar1 = polar_dual(&t1, Some(&center))?;
    let polar2 = polar_dual(&t2, Some(&center))?;
    let l1 = ef_from_vrep(polar1.vrep().expect("polar is minimal"));
    let l2 = ef_from_vrep(polar2.vrep().expect("polar is minimal"));
    let union = balas_union(&l1, &l2)?;
    let back = ef_polar(&union, Some(&center))?;

    // Lift back: t = L (x − base) with L Bᵀ = I, plus the hull equations.
    let bt = linalg::transpose(&basis, d);
    let (l, _) = left_inverse(&bt, k);
    let mut e = Vec::new();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for i in 0..back.rows() {
        let row: Vector = (0..d).map(|j| (0..k).map(|s| &back.e[i][s] * &l[s][j]).sum()).collect();
        g.push(&back.g[i] + linalg::dot(&row, &base));
        e.push(row);
        f.push(back.f[i].clone());
    }
    for eq in &qh.equations {
        e.push(eq.a.clone());
        f.push(linalg::zeros(back.r));
        g.push(eq.c.clone());
    }
    let formulation = ExtendedFormulation { name: "polar-route".into(), d, r: back.r, e, f, g };
    let center_x = linalg::add(&base, &linalg::mat_vec(&bt, &center));
    Ok(PolarRoute {
        center: center_x,
        polar_sizes: (l1.size(), l2.size()),
        union_size: union.size(),
        formulation,
    })
}

/// Flow formulation of the forest polytope of `K_n`.
///
/// A forest of `K_n` is what remains of a spanning tree of `K_n` plus a
/// root `0` joined to every vertex once the root edges are deleted. The
/// spanning trees are the arborescences rooted at `0`: arc variables `z`
/// with in-degree one at each vertex, and for every vertex `k` a unit
/// `0 → k` flow `f^k ≤ z` carried with slack `s^k = z − f^k`. Edge
/// variables are `x_ij = z_ij + z_ji`.
///
/// Lifted variables: `n²` arcs and `n³` flow and `n³` slack entries, so the
/// size is `2n³ + n² ≤ 3n³`.
pub fn martin_forest_ef(n: usize) -> Result<ExtendedFormulation> {
    if n < 2 {
        return Err(Error::input("forest formulation needs n >= 2"));
    }
    let d = n * (n - 1) / 2;
    // Arcs: (0, v) for v in 1..=n, then (u, v) for u ≠ v in 1..=n.
    let mut arcs: Vec<(usize, usize)> = (1..=n).map(|v| (0, v)).collect();
    for u in 1..=n {
        for v in 1..=n {
            if u != v {
                arcs.push((u, v));
            }
        }
    }
    let na = arcs.len();
    let r = na + 2 * n * na;
    let z = |a: usize| a;
    let flow = |k: usize, a: usize| na + (k - 1) * na + a;
    let slack = |k: usize, a: usize| na + n * na + (k - 1) * na + a;
    let mut e = Vec::new();
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut push = |erow: Vector, frow: Vector, rhs: Rational| {
        e.push(erow);
        f.push(frow);
        g.push(rhs);
    };
    for i in 1..=n {
        for j in i + 1..=n {
            let mut erow = linalg::zeros(d);
            erow[complete_edge_index(n, i, j)] = Rational::one();
            let mut frow = linalg::zeros(r);
            for (a, &(u, v)) in arcs.iter().enumerate() {
                if (u, v) == (i, j) || (u, v) == (j, i) {
                    frow[z(a)] = -Rational::one();
                }
            }
            push(erow, frow, Rational::zero());
        }
    }
    for v in 1..=n {
        let mut frow = linalg::zeros(r);
        for (a, &(_, h)) in arcs.iter().enumerate() {
            if h == v {
                frow[z(a)] = Rational::one();
            }
        }
        push(linalg::zeros(d), frow, Rational::one());
    }
    for k in 1..=n {
        for v in 0..=n {
            let mut frow = linalg::zeros(r);
            for (a, &(t, h)) in arcs.iter().enumerate() {
                if t == v {
                    frow[flow(k, a)] += Rational::one();
                }
                if h == v {
                    frow[flow(k, a)] -= Rational::one();
                }
            }
            let rhs = if v == 0 {
                Rational::one()
            } else if v == k {
                -Rational::one()
            } else {
                Rational::zero()
            };
            push(linalg::zeros(d), frow, rhs);
        }
        for a in 0..na {
            let mut frow = linalg::zeros(r);
            frow[flow(k, a)] = Rational::one();
            frow[slack(k, a)] = Rational::one();
            frow[z(a)] = -Rational::one();
            push(linalg::zeros(d), frow, Rational::zero());
        }
    }
    Ok(ExtendedFormulation { name: format!("martin-{n}"), d, r, e, f, g })
}

/// Checks the forest formulation for `n` against the enumerated forests.
pub fn validate_martin(n: usize) -> Result<bool> {
    if n > MARTIN_VALIDATION_MAX_N {
        return Err(Error::size_limit(
            "forest formulation validation n",
            n as u128,
            MARTIN_VALIDATION_MAX_N as u128,
        ));
    }
    let e = martin_forest_ef(n)?;
    let target = Polytope::from_vrep(crate::zoo::enumerate_forests(n)?);
    ef_validate(&e, &target)
}
