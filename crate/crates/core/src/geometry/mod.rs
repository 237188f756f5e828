//! Exact polyhedral kernel: representations, LP, double description,
//! redundancy removal and polarity.

mod dd;
pub mod lp;
mod ops;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rational::Rational;

pub use lp::{lp_optimize, LpSolution, LpStatus};
pub(crate) use ops::barycenter;
pub use ops::{
    affine_hull, contains, hrep_generators, hrep_to_vrep, minimize_hrep, polar_dual,
    polytopes_equal, vrep_to_hrep, Generators, Membership,
};


pub type Point = Vector;

/// `a · x ≤ b`
#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct LinearInequality {
    pub a: Vector,
    pub b: Rational,
}

/// `a · x = c`
#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct LinearEquation {
    pub a: Vector,
    pub c: Rational,
}

impl LinearInequality {
    pub fn new(a: Vector, b: Rational) -> Self {
        LinearInequality { a, b }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `b - a · x`
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.b - linalg::dot(&self.a, x)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_trivial(&self) -> bool {
        linalg::is_zero_vec(&self.a)
    }

    /// Positive rescaling with coprime integer coefficients.
    pub fn canonical(&self) -> Self {
        if self.is_trivial() {
            return LinearInequality {
                a: self.a.clone(),
                b: Rational::from(self.b.signum()),
            };
        }
        let mut all = self.a.clone();
        all.push(self.b.clone());
        let mut p = linalg::primitive(&all);
        let b = p.pop().expect("nonempty");
        LinearInequality { a: p, b }
    }

    /// Canonical representative modulo a canonical equation system: the
    /// coefficient at every equation pivot is eliminated, then the row is
    /// rescaled as in [`LinearInequality::canonical`].
    pub fn canonical_mod(&self, eqs: &[LinearEquation]) -> Self {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        for eq in eqs {
            let p = eq.pivot().expect("canonical equation has a pivot");
            if !a[p].is_zero() {
                let f = -(&a[p] / &eq.a[p]);
                linalg::axpy(&mut a, &f, &eq.a);
                b += &f * &eq.c;
            }
        }
        LinearInequality { a, b }.canonical()
    }

    pub fn negated_equation(eq: &LinearEquation) -> [LinearInequality; 2] {
        [
            LinearInequality::new(eq.a.clone(), eq.c.clone()),
            LinearInequality::new(linalg::scale(&eq.a, &-Rational::one()), -&eq.c),
        ]
    }
}

impl LinearEquation {
    pub fn new(a: Vector, c: Rational) -> Self {
        LinearEquation { a, c }
    }

    pub fn residual(&self, x: &[Rational]) -> Rational {
        linalg::dot(&self.a, x) - &self.c
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        self.residual(x).is_zero()
    }

    pub fn pivot(&self) -> Option<usize> {
        self.a.iter().position(|x| !x.is_zero())
    }

    /// Coprime integers with a positive leading coefficient.
    pub fn canonical(&self) -> Self {
        let mut all = self.a.clone();
        all.push(self.c.clone());
        let mut p = linalg::primitive(&all);
        if let Some(i) = p.iter().position(|x| !x.is_zero()) {
            if p[i].is_negative() {
                p = p.iter().map(|x| -x).collect();
            }
        }
        let c = p.pop().expect("nonempty");
        LinearEquation { a: p, c }
    }
}

/// Canonical basis of an equation system: reduced row echelon form with
/// left-to-right pivots, each row rescaled to coprime integers. Returns
/// `None` if the system is inconsistent.
pub fn canonical_equations(eqs: &[LinearEquation], dim: usize) -> Option<Vec<LinearEquation>> {
    if eqs.is_empty() {
        return Some(Vec::new());
    }
    let rows: Vec<Vector> = eqs
        .iter()
        .map(|e| {
            let mut r = e.a.clone();
            r.push(e.c.clone());
            r
        })
        .collect();
    let (r, pivots) = linalg::rref(&rows, dim + 1);
    if pivots.last() == Some(&dim) {
        return None;
    }
    Some(
        r.into_iter()
            .map(|mut row| {
                let c = row.pop().expect("nonempty");
                LinearEquation { a: row, c }.canonical()
            })
            .collect(),
    )
}

fn cmp_vec(a: &[Rational], b: &[Rational]) -> Ordering {
    a.iter().cmp(b.iter())
}

impl PartialOrd for LinearInequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearInequality {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_vec(&self.a, &other.a).then_with(|| self.b.cmp(&other.b))
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.a)?;
        write!(f, " <= {}", self.b)
    }
}

impl fmt::Debug for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.a)?;
        write!(f, " = {}", self.c)
    }
}

impl fmt::Debug for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, a: &[Rational]) -> fmt::Result {
    let mut first = true;
    for (i, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
        if first {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        if mag.is_one() {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "{mag} x{}", i + 1)?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    pub inequalities: Vec<LinearInequality>,
    pub equations: Vec<LinearEquation>,
}

impl HRep {
    pub fn new(
        dim: usize,
        inequalities: Vec<LinearInequality>,
        equations: Vec<LinearEquation>,
    ) -> Result<Self> {
        let h = HRep { dim, inequalities, equations };
        h.check()?;
        Ok(h)
    }

    pub fn from_inequalities(dim: usize, inequalities: Vec<LinearInequality>) -> Result<Self> {
        Self::new(dim, inequalities, Vec::new())
    }

    pub(crate) fn check(&self) -> Result<()> {
        if let Some(r) = self.inequalities.iter().find(|r| r.a.len() != self.dim) {
            return Err(Error::input(format!(
                "inequality of length {} in dimension {}",
                r.a.len(),
                self.dim
            )));
        }
        if let Some(r) = self.equations.iter().find(|r| r.a.len() != self.dim) {
            return Err(Error::input(format!(
                "equation of length {} in dimension {}",
                r.a.len(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn satisfies(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|e| e.is_satisfied(x))
            && self.inequalities.iter().all(|r| r.is_satisfied(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub dim: usize,
    pub vertices: Vec<Point>,
}

impl VRep {
    /// Drops duplicate points; fails on a length mismatch.
    pub fn new(dim: usize, mut vertices: Vec<Point>) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::input(format!(
                "point of length {} in dimension {dim}",
                v.len()
            )));
        }
        vertices.sort_by(|a, b| cmp_vec(a, b));
        vertices.dedup();
        Ok(VRep { dim, vertices })
    }

    pub fn empty(dim: usize) -> Self {
        VRep { dim, vertices: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A polytope held in either or both representations.
///
/// When both are present they describe the same point set. The `minimal`
/// flags record that a representation is irredundant: the hrep then holds
/// exactly the canonical facets plus the canonical affine-hull equations,
/// and the vrep exactly the vertices.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    hrep: Option<HRep>,
    vrep: Option<VRep>,
    hrep_minimal: bool,
    vrep_minimal: bool,
}

impl Polytope {
    pub fn from_hrep(h: HRep) -> Self {
        Polytope { dim: h.dim, hrep: Some(h), vrep: None, hrep_minimal: false, vrep_minimal: false }
    }

    pub fn from_vrep(v: VRep) -> Self {
        Polytope { dim: v.dim, hrep: None, vrep: Some(v), hrep_minimal: false, vrep_minimal: false }
    }

    pub fn from_vertices(dim: usize, vertices: Vec<Point>) -> Result<Self> {
        Ok(Self::from_vrep(VRep::new(dim, vertices)?))
    }

    /// The empty set in `R^dim`.
    pub fn empty(dim: usize) -> Self {
        Polytope {
            dim,
            hrep: None,
            vrep: Some(VRep::empty(dim)),
            hrep_minimal: false,
            vrep_minimal: true,
        }
    }

    pub(crate) fn from_minimal_parts(h: HRep, v: VRep) -> Self {
        Polytope { dim: h.dim, hrep: Some(h), vrep: Some(v), hrep_minimal: true, vrep_minimal: true }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> Option<&HRep> {
        self.hrep.as_ref()
    }

    pub fn vrep(&self) -> Option<&VRep> {
        self.vrep.as_ref()
    }

    pub fn minimal_flags(&self) -> (bool, bool) {
        (self.hrep_minimal, self.vrep_minimal)
    }

    pub fn is_minimal(&self) -> bool {
        (self.hrep_minimal || self.is_known_empty()) && self.vrep_minimal
    }

    fn is_known_empty(&self) -> bool {
        self.vrep_minimal && self.vrep.as_ref().is_some_and(|v| v.is_empty())
    }

    /// Both representations, irredundant and canonically ordered. The empty
    /// polytope stays empty (with no hrep).
    pub fn minimal(&self) -> Result<Polytope> {
        if self.is_minimal() {
            return Ok(self.clone());
        }
        let points = match (&self.vrep, &self.hrep) {
            (Some(v), _) => v.vertices.clone(),
            (None, Some(h)) => match hrep_to_vrep(h) {
                Ok(v) => v.vertices,
                Err(Error::EmptyPolytope) => Vec::new(),
                Err(e) => return Err(e),
            },
            (None, None) => return Err(Error::input("polytope without representation")),
        };
        if points.is_empty() {
            return Ok(Polytope::empty(self.dim));
        }
        let v = VRep::new(self.dim, points)?;
        let h = vrep_to_hrep(&v)?;
        let vertices = ops::extreme_points(&h, &v.vertices);
        Ok(Polytope::from_minimal_parts(h, VRep { dim: self.dim, vertices }))
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.minimal()?.vrep.as_ref().is_none_or(|v| v.is_empty()))
    }

    /// Minimal hrep. Errors with `EmptyPolytope` on the empty set.
    pub fn minimal_hrep(&self) -> Result<HRep> {
        let m = self.minimal()?;
        m.hrep.ok_or(Error::EmptyPolytope)
    }

    pub fn vertices(&self) -> Result<Vec<Point>> {
        Ok(self.minimal()?.vrep.map(|v| v.vertices).unwrap_or_default())
    }

    /// Affine dimension; `-1` for the empty set.
    pub fn affine_dim(&self) -> Result<isize> {
        let m = self.minimal()?;
        match m.hrep {
            None => Ok(-1),
            Some(h) => Ok(self.dim as isize - h.equations.len() as isize),
        }
    }
}
