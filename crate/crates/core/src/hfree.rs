//! Redundancy of facets with respect to a valid family `H`, the residual
//! system `Q_H`, two-stage separation and cutting-plane optimization.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::ef::ExtendedFormulation;
use crate::error::{Error, Result};
use crate::families::{FamilyRow, InequalityFamily};
use crate::geometry::lp::{maximize, LpSolution, LpStatus};
use crate::geometry::{HRep, LinearEquation, LinearInequality, Polytope};
use crate::linalg::{self, Vector};
use crate::rational::Rational;
use crate::xc::{xc_bounds_hrep, XcBounds};

/// Families up to this many rows are enumerated once instead of being
/// accessed through separation.
pub const ENUMERATE_BELOW: u128 = 4096;

#[derive(Clone, Debug, Serialize)]
pub enum Certificate {
    /// `Σ y_i h_i + Σ u_j e_j` reproduces the tested row with right-hand
    /// side `bound ≤ b`; only rows with `y_i > 0` are listed.
    Redundant {
        multipliers: Vec<(String, LinearInequality, Rational)>,
        eq_multipliers: Vec<Rational>,
        bound: Rational,
    },
    /// A point satisfying `H` and the equations that violates the row.
    Point(Vector),
    /// `H` and the equations allow unbounded growth along `direction`.
    Ray { point: Vector, direction: Vector },
}

impl Certificate {
    pub fn is_redundant(&self) -> bool {
        matches!(self, Certificate::Redundant { .. })
    }
}

/// Exact check of a redundancy certificate or witness for `row`.
pub fn verify_certificate(
    row: &LinearInequality,
    h: &dyn InequalityFamily,
    eqs: &[LinearEquation],
    cert: &Certificate,
) -> bool {
    let d = row.dim();
    match cert {
        Certificate::Redundant { multipliers, eq_multipliers, bound } => {
            if eq_multipliers.len() != eqs.len() {
                return false;
            }
            let mut combo = linalg::zeros(d);
            let mut rhs = Rational::zero();
            for (_, r, y) in multipliers {
                if !y.is_positive() {
                    return false;
                }
                linalg::axpy(&mut combo, y, &r.a);
                rhs += y * &r.b;
            }
            for (e, u) in eqs.iter().zip(eq_multipliers) {
                linalg::axpy(&mut combo, u, &e.a);
                rhs += u * &e.c;
            }
            let members_valid = multipliers.iter().all(|(_, r, _)| is_member(h, r));
            members_valid && combo == row.a && rhs == *bound && *bound <= row.b
        }
        Certificate::Point(x) => {
            eqs.iter().all(|e| e.is_satisfied(x)) && h.separate(x).is_none() && !row.is_satisfied(x)
        }
        Certificate::Ray { point, direction } => {
            let dir_ok = eqs.iter().all(|e| linalg::dot(&e.a, direction).is_zero())
                && linalg::dot(&row.a, direction).is_positive();
            let rows_ok = h.size() <= ENUMERATE_BELOW
                && h.enumerate().is_ok_and(|all| {
                    all.iter().all(|f| !linalg::dot(&f.row.a, direction).is_positive())
                });
            dir_ok
                && rows_ok
                && eqs.iter().all(|e| e.is_satisfied(point))
                && h.separate(point).is_none()
        }
    }
}

fn is_member(h: &dyn InequalityFamily, r: &LinearInequality) -> bool {
    h.size() > ENUMERATE_BELOW || h.enumerate().is_ok_and(|all| all.iter().any(|f| &f.row == r))
}

/// Access to `H` for repeated redundancy queries: either the full list or
/// the separation oracle.
enum HAccess<'a> {
    Rows(Vec<FamilyRow>),
    Oracle(&'a dyn InequalityFamily),
}

impl<'a> HAccess<'a> {
    fn new(h: &'a dyn InequalityFamily) -> Result<Self> {
        if h.size() <= ENUMERATE_BELOW {
            Ok(HAccess::Rows(h.enumerate()?))
        } else {
            Ok(HAccess::Oracle(h))
        }
    }
}

fn certificate_from(
    rows: &[FamilyRow],
    sol: &LpSolution,
) -> (Vec<(String, LinearInequality, Rational)>, Vec<Rational>) {
    let mult = rows
        .iter()
        .zip(&sol.ineq_duals)
        .filter(|(_, y)| y.is_positive())
        .map(|(r, y)| (r.kind.to_string(), r.row.clone(), y.clone()))
        .collect();
    (mult, sol.eq_duals.clone())
}

/// `max a·d` over the recession cone of `rows ∪ eqs`, normalized by
/// `a·d ≤ 1`.
fn recession_direction(
    a: &[Rational],
    rows: &[FamilyRow],
    eqs: &[LinearEquation],
) -> Option<Vector> {
    let d = a.len();
    let mut cone: Vec<LinearInequality> = rows
        .iter()
        .map(|r| LinearInequality::new(r.row.a.clone(), Rational::zero()))
        .collect();
    cone.push(LinearInequality::new(a.to_vec(), Rational::one()));
    let ceqs: Vec<LinearEquation> =
        eqs.iter().map(|e| LinearEquation::new(e.a.clone(), Rational::zero())).collect();
    let ci: Vec<&LinearInequality> = cone.iter().collect();
    let ce: Vec<&LinearEquation> = ceqs.iter().collect();
    match maximize(d, a, &ci, &ce) {
        LpStatus::Optimal(s) if s.value.is_positive() => Some(s.point),
        _ => None,
    }
}

fn redundancy(row: &LinearInequality, access: &HAccess<'_>, eqs: &[LinearEquation]) -> Result<Certificate> {
    let eq_refs: Vec<&LinearEquation> = eqs.iter().collect();
    let (mut rows, oracle) = match access {
        HAccess::Rows(all) => (all.clone(), None),
        HAccess::Oracle(h) => (h.seed_rows(), Some(*h)),
    };
    loop {
        let refs: Vec<&LinearInequality> = rows.iter().map(|r| &r.row).collect();
        match maximize(row.dim(), &row.a, &refs, &eq_refs) {
            LpStatus::Infeasible => return Err(Error::EmptyPolytope),
            LpStatus::Unbounded => {
                if let Some(h) = oracle {
                    // Seed rows do not bound the objective; use the full list.
                    rows = h.enumerate()?;
                    if rows.is_empty() {
                        return Err(Error::UnboundedInput);
                    }
                    let refs: Vec<&LinearInequality> = rows.iter().map(|r| &r.row).collect();
                    if !matches!(maximize(row.dim(), &row.a, &refs, &eq_refs), LpStatus::Unbounded) {
                        return redundancy(row, &HAccess::Rows(rows), eqs);
                    }
                }
                let direction =
                    recession_direction(&row.a, &rows, eqs).expect("unbounded LP has a ray");
                let zero = linalg::zeros(row.dim());
                let refs: Vec<&LinearInequality> = rows.iter().map(|r| &r.row).collect();
                let point = match maximize(row.dim(), &zero, &refs, &eq_refs) {
                    LpStatus::Optimal(s) => s.point,
                    _ => unreachable!("feasible system"),
                };
                return Ok(Certificate::Ray { point, direction });
            }
            LpStatus::Optimal(sol) => {
                if let Some(h) = oracle {
                    if let Some(cut) = h.separate(&sol.point) {
                        rows.push(cut);
                        continue;
                    }
                }
                if sol.value <= row.b {
                    let (multipliers, eq_multipliers) = certificate_from(&rows, &sol);
                    return Ok(Certificate::Redundant { multipliers, eq_multipliers, bound: sol.value });
                }
                return Ok(Certificate::Point(sol.point));
            }
        }
    }
}

/// Decides whether `sup { a·x : H, eqs } ≤ b` and returns a certificate
/// either way.
pub fn facet_redundant_wrt(
    ineq: &LinearInequality,
    h: &dyn InequalityFamily,
    eqs: &[LinearEquation],
) -> Result<(bool, Certificate)> {
    check_family_dim(h, ineq.dim())?;
    let cert = redundancy(ineq, &HAccess::new(h)?, eqs)?;
    Ok((cert.is_redundant(), cert))
}

fn check_family_dim(h: &dyn InequalityFamily, d: usize) -> Result<()> {
    if h.ambient_dim() != d {
        return Err(Error::input(format!(
            "family {} lives in dimension {}, polytope in {d}",
            h.name(),
            h.ambient_dim()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct RetainedRow {
    pub row: LinearInequality,
    pub witness: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct RemovedRow {
    pub row: LinearInequality,
    pub certificate: Certificate,
}

/// The facets of `Q` split by redundancy with respect to `H` and the
/// affine hull of `Q`.
#[derive(Clone, Debug, Serialize)]
pub struct QHResult {
    pub dim: usize,
    pub family: String,
    pub equations: Vec<LinearEquation>,
    pub retained: Vec<RetainedRow>,
    pub removed: Vec<RemovedRow>,
    pub vertices: usize,
}

impl QHResult {
    /// True when no facet survives; the system of `Q_H` is then just the
    /// affine hull, which is different from `Q_H` being the empty set.
    pub fn empty_flag(&self) -> bool {
        self.retained.is_empty()
    }

    pub fn facets(&self) -> usize {
        self.retained.len() + self.removed.len()
    }

    pub fn retained_rows(&self) -> Vec<LinearInequality> {
        self.retained.iter().map(|r| r.row.clone()).collect()
    }

    /// `{x : equations, retained rows}`.
    pub fn hrep(&self) -> HRep {
        HRep { dim: self.dim, inequalities: self.retained_rows(), equations: self.equations.clone() }
    }
}

pub fn compute_qh(q: &Polytope, h: &dyn InequalityFamily) -> Result<QHResult> {
    check_family_dim(h, q.dim())?;
    let m = q.minimal()?;
    let hrep = m.hrep().ok_or(Error::EmptyPolytope)?;
    let access = HAccess::new(h)?;
    let eqs = &hrep.equations;
    let certs: Vec<Result<Certificate>> =
        hrep.inequalities.par_iter().map(|f| redundancy(f, &access, eqs)).collect();
    let mut retained = Vec::new();
    let mut removed = Vec::new();
    for (f, c) in hrep.inequalities.iter().zip(certs) {
        let c = c?;
        if c.is_redundant() {
            removed.push(RemovedRow { row: f.clone(), certificate: c });
        } else {
            retained.push(RetainedRow { row: f.clone(), witness: c });
        }
    }
    Ok(QHResult {
        dim: q.dim(),
        family: h.name().to_string(),
        equations: eqs.clone(),
        retained,
        removed,
        vertices: m.vrep().map_or(0, |v| v.len()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationAnswer {
    Inside,
    ViolatedByH(FamilyRow),
    ViolatedByQH(LinearInequality),
}

/// Separation over `Q`: the equations are checked first, then the oracle
/// of `H`, then the explicit rows of `Q_H`.
pub fn hfree_separate(x: &[Rational], h: &dyn InequalityFamily, qh: &QHResult) -> Result<SeparationAnswer> {
    if x.len() != qh.dim {
        return Err(Error::input(format!("point of length {} in dimension {}", x.len(), qh.dim)));
    }
    if let Some(e) = qh.equations.iter().find(|e| !e.is_satisfied(x)) {
        return Err(Error::AffineHullViolation(e.to_string()));
    }
    if let Some(r) = h.separate(x) {
        return Ok(SeparationAnswer::ViolatedByH(r));
    }
    Ok(qh
        .retained
        .iter()
        .find(|r| !r.row.is_satisfied(x))
        .map_or(SeparationAnswer::Inside, |r| SeparationAnswer::ViolatedByQH(r.row.clone())))
}

#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub value: Rational,
    pub point: Vector,
    pub rounds: usize,
    pub cuts: Vec<FamilyRow>,
}

/// Maximizes `c·x` over `Q` by cutting planes: the working system holds
/// the equations, the seed rows of `H`, accumulated `H` cuts, and either
/// the retained rows of `Q_H` or, when given, an extended formulation of
/// `Q_H` in lifted variables.
pub fn hfree_optimize(
    c: &[Rational],
    h: &dyn InequalityFamily,
    qh: &QHResult,
    ef: Option<&ExtendedFormulation>,
) -> Result<OptimizeResult> {
    let d = qh.dim;
    if c.len() != d {
        return Err(Error::input(format!("objective of length {} in dimension {d}", c.len())));
    }
    check_family_dim(h, d)?;
    let r = ef.map_or(0, |e| e.r());
    if let Some(e) = ef {
        if e.d() != d {
            return Err(Error::input(format!("formulation in dimension {}, polytope in {d}", e.d())));
        }
    }
    let total = d + r;
    let lift = |a: &[Rational]| {
        let mut v = a.to_vec();
        v.resize(total, Rational::zero());
        v
    };
    let mut fixed_ineqs: Vec<LinearInequality> = Vec::new();
    let mut fixed_eqs: Vec<LinearEquation> =
        qh.equations.iter().map(|e| LinearEquation::new(lift(&e.a), e.c.clone())).collect();
    match ef {
        None => {
            fixed_ineqs.extend(qh.retained.iter().map(|rr| LinearInequality::new(lift(&rr.row.a), rr.row.b.clone())));
        }
        Some(e) => {
            for k in 0..r {
                let mut a = linalg::zeros(total);
                a[d + k] = -Rational::one();
                fixed_ineqs.push(LinearInequality::new(a, Rational::zero()));
            }
            for (i, gi) in e.g().iter().enumerate() {
                let mut a = e.e_mat()[i].clone();
                a.extend(e.f_mat()[i].iter().cloned());
                fixed_eqs.push(LinearEquation::new(a, gi.clone()));
            }
        }
    }
    let mut cuts: Vec<FamilyRow> = h.seed_rows();
    let obj = lift(c);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let lifted_cuts: Vec<LinearInequality> =
            cuts.iter().map(|f| LinearInequality::new(lift(&f.row.a), f.row.b.clone())).collect();
        let ineqs: Vec<&LinearInequality> = fixed_ineqs.iter().chain(&lifted_cuts).collect();
        let eqs: Vec<&LinearEquation> = fixed_eqs.iter().collect();
        let sol = match maximize(total, &obj, &ineqs, &eqs) {
            LpStatus::Optimal(s) => s,
            LpStatus::Infeasible => return Err(Error::EmptyPolytope),
            LpStatus::Unbounded => return Err(Error::UnboundedInput),
        };
        let x: Vector = sol.point[..d].to_vec();
        match h.separate(&x) {
            Some(cut) => cuts.push(cut),
            None => {
                let seeds = h.seed_rows().len();
                return Ok(OptimizeResult { value: sol.value, point: x, rounds, cuts: cuts.split_off(seeds) });
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub certificates: bool,
    pub timings: bool,
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HfreeReport {
    pub schema: &'static str,
    pub instance: String,
    pub family: String,
    pub dim: usize,
    pub vertices: usize,
    pub equations: usize,
    pub facets: usize,
    pub retained: usize,
    pub removed: usize,
    pub qh_empty: bool,
    pub xc_lb: u64,
    pub xc_ub: u64,
    pub xc_exact: bool,
    pub retained_rows: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub removed_rows: Option<Vec<RemovedRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub qh: u128,
    pub xc: u128,
}

fn millis(d: Duration) -> u128 {
    d.as_millis()
}

pub fn hfree_report(
    instance: &str,
    q: &Polytope,
    h: &dyn InequalityFamily,
    opts: &ReportOptions,
) -> Result<HfreeReport> {
    let t0 = Instant::now();
    let qh = compute_qh(q, h)?;
    let t1 = Instant::now();
    let bounds = if qh.empty_flag() {
        XcBounds::trivial()
    } else {
        xc_bounds_hrep(&qh.hrep(), opts.budget)?
    };
    let t2 = Instant::now();
    Ok(HfreeReport {
        schema: "hfree-report v1",
        instance: instance.to_string(),
        family: h.name().to_string(),
        dim: qh.dim,
        vertices: qh.vertices,
        equations: qh.equations.len(),
        facets: qh.facets(),
        retained: qh.retained.len(),
        removed: qh.removed.len(),
        qh_empty: qh.empty_flag(),
        xc_lb: bounds.lb,
        xc_ub: bounds.ub,
        xc_exact: bounds.exact,
        retained_rows: qh.retained.iter().map(|r| r.row.to_string()).collect(),
        removed_rows: opts.certificates.then(|| qh.removed.clone()),
        timings_ms: opts.timings.then(|| Timings { qh: millis(t1 - t0), xc: millis(t2 - t1) }),
    })
}

impl HfreeReport {
    /// Deterministic `key: value` rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.schema);
        let _ = writeln!(s, "instance: {}", self.instance);
        let _ = writeln!(s, "family: {}", self.family);
        let _ = writeln!(s, "dim: {}", self.dim);
        let _ = writeln!(s, "vertices: {}", self.vertices);
        let _ = writeln!(s, "equations: {}", self.equations);
        let _ = writeln!(s, "facets: {}", self.facets);
        let _ = writeln!(s, "retained: {}", self.retained);
        let _ = writeln!(s, "removed: {}", self.removed);
        let _ = writeln!(s, "QH: {}", if self.qh_empty { "empty" } else { "nonempty" });
        let _ = writeln!(s, "xc_lb: {}", self.xc_lb);
        let _ = writeln!(s, "xc_ub: {}", self.xc_ub);
        let _ = writeln!(s, "xc_bound: {}", if self.xc_exact { "exact-rc" } else { "bounds" });
        for r in &self.retained_rows {
            let _ = writeln!(s, "retained_row: {r}");
        }
        if let Some(removed) = &self.removed_rows {
            for r in removed {
                let _ = writeln!(s, "removed_row: {}", r.row);
                if let Certificate::Redundant { multipliers, eq_multipliers, bound } = &r.certificate {
                    let _ = write!(s, "  certificate: bound {bound};");
                    for (label, _, y) in multipliers {
                        let _ = write!(s, " {y}*[{label}]");
                    }
                    let eqs: Vec<String> = eq_multipliers.iter().map(|u| u.to_string()).collect();
                    let _ = writeln!(s, "; eq [{}]", eqs.join(" "));
                }
            }
        }
        if let Some(t) = &self.timings_ms {
            let _ = writeln!(s, "time_qh_ms: {}", t.qh);
            let _ = writeln!(s, "time_xc_ms: {}", t.xc);
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
