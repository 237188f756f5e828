use rayon::prelude::*;

use super::dd::cone_generators;
use super::lp::{maximize, LpStatus};
use super::{canonical_equations, HRep, LinearEquation, LinearInequality, Point, Polytope, VRep};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rational::Rational;

/// Minkowski–Weyl generators of a polyhedron.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Generators {
    pub vertices: Vec<Point>,
    pub rays: Vec<Vector>,
    pub lines: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Violated(LinearInequality),
}

/// Generators of `{x : h}` by double description on the homogenized cone.
/// With a nontrivial lineality space the "vertices" are one point per
/// minimal face.
pub fn hrep_generators(h: &HRep) -> Result<Generators> {
    h.check()?;
    let d = h.dim;
    let mut rows: Vec<Vector> = Vec::with_capacity(h.inequalities.len() + 1);
    for r in &h.inequalities {
        let mut z = Vec::with_capacity(d + 1);
        z.push(r.b.clone());
        z.extend(r.a.iter().map(|x| -x));
        rows.push(z);
    }
    let mut t_row = linalg::zeros(d + 1);
    t_row[0] = Rational::one();
    rows.push(t_row);
    let eqs: Vec<Vector> = h
        .equations
        .iter()
        .map(|e| {
            let mut z = Vec::with_capacity(d + 1);
            z.push(e.c.clone());
            z.extend(e.a.iter().map(|x| -x));
            z
        })
        .collect();

    let cone = cone_generators(d + 1, &rows, &eqs);
    let mut g = Generators::default();
    for r in cone.rays {
        if r[0].is_zero() {
            g.rays.push(r[1..].to_vec());
        } else {
            let t = r[0].recip();
            g.vertices.push(r[1..].iter().map(|x| x * &t).collect());
        }
    }
    g.lines = cone.lineality.into_iter().map(|l| l[1..].to_vec()).collect();
    g.vertices.sort();
    g.vertices.dedup();
    g.rays.sort();
    Ok(g)
}

/// Vertices of a bounded, nonempty `{x : h}`.
pub fn hrep_to_vrep(h: &HRep) -> Result<VRep> {
    let g = hrep_generators(h)?;
    if g.vertices.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    if !g.rays.is_empty() || !g.lines.is_empty() {
        return Err(Error::UnboundedInput);
    }
    Ok(VRep { dim: h.dim, vertices: g.vertices })
}

/// Irredundant description of `conv(v)`: facets plus canonical affine-hull
/// equations, sorted.
pub fn vrep_to_hrep(v: &VRep) -> Result<HRep> {
    if v.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let d = v.dim;
    // (β, α) with β + α·v_j ≥ 0 encodes -α·x ≤ β.
    let rows: Vec<Vector> = v
        .vertices
        .iter()
        .map(|p| {
            let mut z = Vec::with_capacity(d + 1);
            z.push(Rational::one());
            z.extend(p.iter().cloned());
            z
        })
        .collect();
    let cone = cone_generators(d + 1, &rows, &[]);
    let raw_eqs: Vec<LinearEquation> = cone
        .lineality
        .iter()
        .map(|l| LinearEquation::new(l[1..].to_vec(), -&l[0]))
        .collect();
    let equations = canonical_equations(&raw_eqs, d).expect("vertices satisfy their hull");
    let mut inequalities: Vec<LinearInequality> = cone
        .rays
        .iter()
        .filter(|r| rows.iter().any(|row| linalg::dot(row, r).is_zero()))
        .map(|r| {
            LinearInequality::new(r[1..].iter().map(|x| -x).collect(), r[0].clone())
                .canonical_mod(&equations)
        })
        .filter(|r| !r.is_trivial())
        .collect();
    inequalities.sort();
    inequalities.dedup();
    Ok(HRep { dim: d, inequalities, equations })
}

/// Points among `points` at which the tight rows of `h` have full rank.
pub(crate) fn extreme_points(h: &HRep, points: &[Point]) -> Vec<Point> {
    let eq_rows: Vec<Vector> = h.equations.iter().map(|e| e.a.clone()).collect();
    let mut out: Vec<Point> = points
        .par_iter()
        .filter(|p| {
            let mut tight = eq_rows.clone();
            tight.extend(h.inequalities.iter().filter(|r| r.slack(p).is_zero()).map(|r| r.a.clone()));
            linalg::rank(&tight, h.dim) == h.dim
        })
        .cloned()
        .collect();
    out.sort();
    out
}

/// Canonical affine-hull equations of a point set and its dimension.
pub fn affine_hull(v: &VRep) -> Result<(Vec<LinearEquation>, usize)> {
    let Some(base) = v.vertices.first() else {
        return Err(Error::EmptyPolytope);
    };
    let diffs: Vec<Vector> = v.vertices[1..].iter().map(|p| linalg::sub(p, base)).collect();
    let normals = linalg::nullspace(&diffs, v.dim);
    let raw: Vec<LinearEquation> = normals
        .into_iter()
        .map(|a| {
            let c = linalg::dot(&a, base);
            LinearEquation::new(a, c)
        })
        .collect();
    let eqs = canonical_equations(&raw, v.dim).expect("consistent");
    let dim = v.dim - eqs.len();
    Ok((eqs, dim))
}

fn implicit_equalities(h: &HRep) -> Result<(Vec<LinearEquation>, Vec<LinearInequality>)> {
    let d = h.dim;
    let mut eqs: Vec<LinearEquation> = h.equations.clone();
    let mut ineqs: Vec<LinearInequality> = h.inequalities.clone();
    loop {
        // max t  s.t.  a_i x + t ≤ b_i,  t ≤ 1,  equations.
        let lifted: Vec<LinearInequality> = ineqs
            .iter()
            .map(|r| {
                let mut a = r.a.clone();
                a.push(Rational::one());
                LinearInequality::new(a, r.b.clone())
            })
            .chain(std::iter::once({
                let mut a = linalg::zeros(d + 1);
                a[d] = Rational::one();
                LinearInequality::new(a, Rational::one())
            }))
            .collect();
        let leqs: Vec<LinearEquation> = eqs
            .iter()
            .map(|e| {
                let mut a = e.a.clone();
                a.push(Rational::zero());
                LinearEquation::new(a, e.c.clone())
            })
            .collect();
        let mut c = linalg::zeros(d + 1);
        c[d] = Rational::one();
        let li: Vec<&LinearInequality> = lifted.iter().collect();
        let le: Vec<&LinearEquation> = leqs.iter().collect();
        let sol = match maximize(d + 1, &c, &li, &le) {
            LpStatus::Optimal(s) => s,
            LpStatus::Infeasible => return Err(Error::EmptyPolytope),
            LpStatus::Unbounded => unreachable!("t is bounded above"),
        };
        if sol.value.is_negative() {
            return Err(Error::EmptyPolytope);
        }
        if sol.value.is_positive() {
            return Ok((eqs, ineqs));
        }
        let mut keep = Vec::with_capacity(ineqs.len());
        let mut moved = false;
        for (r, y) in ineqs.into_iter().zip(&sol.ineq_duals) {
            if y.is_positive() {
                eqs.push(LinearEquation::new(r.a, r.b));
                moved = true;
            } else {
                keep.push(r);
            }
        }
        debug_assert!(moved);
        ineqs = keep;
        if ineqs.is_empty() {
            return Ok((eqs, ineqs));
        }
    }
}

/// Moves implicit equalities into the equation block, canonicalizes, and
/// drops every inequality implied by the others.
pub fn minimize_hrep(h: &HRep) -> Result<HRep> {
    h.check()?;
    let (eqs, ineqs) = implicit_equalities(h)?;
    let equations = canonical_equations(&eqs, h.dim).ok_or(Error::EmptyPolytope)?;
    let mut rows: Vec<LinearInequality> = ineqs
        .iter()
        .map(|r| r.canonical_mod(&equations))
        .filter(|r| !r.is_trivial())
        .collect();
    rows.sort();
    rows.dedup();

    let eq_refs: Vec<&LinearEquation> = equations.iter().collect();
    let keep: Vec<bool> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            let others: Vec<&LinearInequality> =
                rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r).collect();
            match maximize(h.dim, &rows[i].a, &others, &eq_refs) {
                LpStatus::Optimal(s) => s.value > rows[i].b,
                LpStatus::Unbounded => true,
                LpStatus::Infeasible => unreachable!("feasible system"),
            }
        })
        .collect();
    let inequalities = rows.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect();
    Ok(HRep { dim: h.dim, inequalities, equations })
}

/// Polar of `p` with respect to `center` (default: vertex barycenter),
/// translated back so that `center` is again the reference point.
pub fn polar_dual(p: &Polytope, center: Option<&[Rational]>) -> Result<Polytope> {
    let m = p.minimal()?;
    let (Some(h), Some(v)) = (m.hrep(), m.vrep()) else {
        return Err(Error::NotFullDim);
    };
    if !h.equations.is_empty() || v.is_empty() {
        return Err(Error::NotFullDim);
    }
    let d = p.dim();
    let c: Vector = match center {
        Some(c) if c.len() != d => {
            return Err(Error::input(format!("center of length {} in dimension {d}", c.len())))
        }
        Some(c) => c.to_vec(),
        None => barycenter(&v.vertices),
    };
    let mut vertices = Vec::with_capacity(h.inequalities.len());
    for r in &h.inequalities {
        let beta = r.slack(&c);
        if !beta.is_positive() {
            return Err(Error::NotInterior);
        }
        let inv = beta.recip();
        vertices.push(r.a.iter().zip(&c).map(|(a, ci)| a * &inv + ci).collect::<Vector>());
    }
    let mut inequalities: Vec<LinearInequality> = v
        .vertices
        .iter()
        .map(|x| {
            let a = linalg::sub(x, &c);
            let b = Rational::one() + linalg::dot(&a, &c);
            LinearInequality::new(a, b).canonical()
        })
        .collect();
    inequalities.sort();
    let hrep = HRep { dim: d, inequalities, equations: Vec::new() };
    Ok(Polytope::from_minimal_parts(hrep, VRep::new(d, vertices)?))
}

pub(crate) fn barycenter(points: &[Point]) -> Vector {
    let d = points.first().map_or(0, Vec::len);
    let mut s = linalg::zeros(d);
    for p in points {
        s = linalg::add(&s, p);
    }
    let inv = Rational::from(points.len()).recip();
    linalg::scale(&s, &inv)
}

/// Membership test; a violated row comes from the minimal hrep (equations
/// contribute one of their two half-spaces).
pub fn contains(p: &Polytope, x: &[Rational]) -> Result<Membership> {
    if x.len() != p.dim() {
        return Err(Error::input(format!("point of length {} in dimension {}", x.len(), p.dim())));
    }
    let m = p.minimal()?;
    let Some(h) = m.hrep() else {
        return Ok(Membership::Violated(LinearInequality::new(
            linalg::zeros(p.dim()),
            -Rational::one(),
        )));
    };
    for e in &h.equations {
        if !e.is_satisfied(x) {
            let [le, ge] = LinearInequality::negated_equation(e);
            let r = if le.is_satisfied(x) { ge } else { le };
            return Ok(Membership::Violated(r));
        }
    }
    Ok(h.inequalities
        .iter()
        .find(|r| !r.is_satisfied(x))
        .map_or(Membership::Inside, |r| Membership::Violated(r.clone())))
}

/// Equality of point sets, compared through vertex sets.
pub fn polytopes_equal(p: &Polytope, q: &Polytope) -> Result<bool> {
    if p.dim() != q.dim() {
        return Err(Error::input(format!("dimensions {} and {} differ", p.dim(), q.dim())));
    }
    Ok(p.vertices()? == q.vertices()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Rational::from_int(x)).collect()
    }

    fn ineq(a: &[i64], b: i64) -> LinearInequality {
        LinearInequality::new(v(a), Rational::from_int(b))
    }

    fn unit_square() -> HRep {
        HRep::from_inequalities(
            2,
            vec![ineq(&[1, 0], 1), ineq(&[-1, 0], 0), ineq(&[0, 1], 1), ineq(&[0, -1], 0)],
        )
        .unwrap()
    }

    #[test]
    fn square_vertices() {
        let vr = hrep_to_vrep(&unit_square()).unwrap();
        assert_eq!(vr.vertices, vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn triangle_round_trip() {
        let vr = VRep::new(2, vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]).unwrap();
        let h = vrep_to_hrep(&vr).unwrap();
        assert_eq!(h.inequalities.len(), 3);
        assert!(h.equations.is_empty());
        assert_eq!(hrep_to_vrep(&h).unwrap(), vr);
    }

    #[test]
    fn single_point_gives_equations() {
        let vr = VRep::new(2, vec![v(&[1, 2])]).unwrap();
        let h = vrep_to_hrep(&vr).unwrap();
        assert_eq!(h.equations.len(), 2);
        assert!(h.inequalities.is_empty());
        assert_eq!(affine_hull(&vr).unwrap().1, 0);
    }

    #[test]
    fn unbounded_and_empty() {
        let h = HRep::from_inequalities(1, vec![ineq(&[-1], 0)]).unwrap();
        assert!(matches!(hrep_to_vrep(&h), Err(Error::UnboundedInput)));
        let h = HRep::from_inequalities(1, vec![ineq(&[1], 0), ineq(&[-1], -1)]).unwrap();
        assert!(matches!(hrep_to_vrep(&h), Err(Error::EmptyPolytope)));
        assert!(matches!(minimize_hrep(&h), Err(Error::EmptyPolytope)));
    }

    #[test]
    fn minimize_drops_dominated() {
        let h = HRep::from_inequalities(1, vec![ineq(&[1], 1), ineq(&[1], 2), ineq(&[-1], 0)])
            .unwrap();
        let m = minimize_hrep(&h).unwrap();
        assert_eq!(m.inequalities, vec![ineq(&[-1], 0), ineq(&[1], 1)]);
    }

    #[test]
    fn minimize_finds_implicit_equality() {
        let h = HRep::from_inequalities(
            2,
            vec![ineq(&[1, 1], 1), ineq(&[-1, -1], -1), ineq(&[-1, 0], 0), ineq(&[0, -1], 0)],
        )
        .unwrap();
        let m = minimize_hrep(&h).unwrap();
        assert_eq!(m.equations, vec![LinearEquation::new(v(&[1, 1]), q(1, 1))]);
        assert_eq!(m.inequalities.len(), 2);
        assert_eq!(minimize_hrep(&m).unwrap(), m);
    }

    #[test]
    fn diagonal_affine_hull() {
        let vr = VRep::new(2, vec![v(&[0, 0]), v(&[1, 1])]).unwrap();
        let (eqs, dim) = affine_hull(&vr).unwrap();
        assert_eq!(dim, 1);
        assert_eq!(eqs, vec![LinearEquation::new(v(&[1, -1]), q(0, 1))]);
    }

    #[test]
    fn polar_of_square_is_diamond() {
        let sq = Polytope::from_hrep(unit_square());
        let c = [q(1, 2), q(1, 2)];
        let d = polar_dual(&sq, Some(&c)).unwrap();
        let verts = d.vertices().unwrap();
        assert_eq!(verts.len(), 4);
        assert!(verts.contains(&vec![q(5, 2), q(1, 2)]));
        let back = polar_dual(&d, Some(&c)).unwrap();
        assert!(polytopes_equal(&back, &sq).unwrap());
        assert_eq!(back.minimal_hrep().unwrap(), sq.minimal_hrep().unwrap());
    }

    #[test]
    fn polar_rejects_boundary_center() {
        let sq = Polytope::from_hrep(unit_square());
        assert!(matches!(polar_dual(&sq, Some(&[q(0, 1), q(1, 2)])), Err(Error::NotInterior)));
        let seg = Polytope::from_vertices(2, vec![v(&[0, 0]), v(&[1, 1])]).unwrap();
        assert!(matches!(polar_dual(&seg, None), Err(Error::NotFullDim)));
    }

    #[test]
    fn membership() {
        let sq = Polytope::from_hrep(unit_square());
        assert_eq!(contains(&sq, &[q(1, 2), q(1, 2)]).unwrap(), Membership::Inside);
        assert_eq!(
            contains(&sq, &v(&[2, 0])).unwrap(),
            Membership::Violated(ineq(&[1, 0], 1))
        );
    }
}
