//! Double description for polyhedral cones `{z : A z ≥ 0, E z = 0}`.
//!
//! The lineality space is split off first, so the incremental phase always
//! works on a pointed cone in a reduced coordinate system. Rows are inserted
//! starting from a simplicial cone spanned by an invertible row block.
//! Adjacency of two rays is decided combinatorially from their zero sets.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::linalg::{self, Vector};
use crate::rational::Rational;

#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    /// Extreme rays of the pointed part, primitive integer vectors.
    pub rays: Vec<Vector>,
    /// Basis of the lineality space.
    pub lineality: Vec<Vector>,
}

struct Ray {
    v: Vector,
    zeros: FixedBitSet,
}

const PAR_THRESHOLD: usize = 64;

pub(crate) fn cone_generators(dim: usize, ineqs: &[Vector], eqs: &[Vector]) -> ConeGenerators {
    let mut all: Vec<Vector> = ineqs.to_vec();
    all.extend(eqs.iter().cloned());
    let lineality = linalg::nullspace(&all, dim);

    // Pointed part lives in W = null(E) ∩ lin^⊥, parametrized as z = N w.
    let mut restrict: Vec<Vector> = eqs.to_vec();
    restrict.extend(lineality.iter().cloned());
    let basis = linalg::nullspace(&restrict, dim);
    let dw = basis.len();
    if dw == 0 {
        return ConeGenerators { rays: Vec::new(), lineality };
    }
    let rows: Vec<Vector> = ineqs
        .iter()
        .map(|a| linalg::primitive(&basis.iter().map(|b| linalg::dot(a, b)).collect::<Vector>()))
        .collect();

    let rays_w = pointed_rays(dw, &rows);
    let rays = rays_w
        .into_iter()
        .map(|w| {
            let mut z = linalg::zeros(dim);
            for (wk, b) in w.iter().zip(&basis) {
                linalg::axpy(&mut z, wk, b);
            }
            linalg::primitive(&z)
        })
        .collect();
    ConeGenerators { rays, lineality }
}

/// Extreme rays of the pointed cone `{w ∈ R^d : rows · w ≥ 0}`; the rows
/// must have rank `d`.
fn pointed_rays(d: usize, rows: &[Vector]) -> Vec<Vector> {
    let m = rows.len();
    let init = linalg::independent_rows(rows, d);
    debug_assert_eq!(init.len(), d, "pointed cone has full row rank");
    let block: Vec<Vector> = init.iter().map(|&i| rows[i].clone()).collect();
    let inv = linalg::inverse(&block).expect("independent rows");

    let mut rays: Vec<Ray> = (0..d)
        .map(|k| {
            let v = linalg::primitive(&(0..d).map(|i| inv[i][k].clone()).collect::<Vector>());
            let mut zeros = FixedBitSet::with_capacity(m);
            for (j, &r) in init.iter().enumerate() {
                if j != k {
                    zeros.insert(r);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    let mut in_init = vec![false; m];
    for &i in &init {
        in_init[i] = true;
    }
    let mut order: Vec<(usize, usize)> = (0..m)
        .filter(|&i| !in_init[i])
        .map(|i| {
            let sat = rays.iter().filter(|r| !linalg::dot(&rows[i], &r.v).is_negative()).count();
            (i, sat)
        })
        .collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    for &(i, _) in &order {
        rays = insert_row(d, rays, i, &rows[i]);
    }
    rays.into_iter().map(|r| r.v).collect()
}

fn insert_row(d: usize, rays: Vec<Ray>, row_idx: usize, row: &[Rational]) -> Vec<Ray> {
    let vals: Vec<Rational> = rays.iter().map(|r| linalg::dot(row, &r.v)).collect();
    let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
    if neg.is_empty() {
        let mut rays = rays;
        for (r, v) in rays.iter_mut().zip(&vals) {
            if v.is_zero() {
                r.zeros.insert(row_idx);
            }
        }
        return rays;
    }

    let need = d.saturating_sub(2);
    let adjacent = |p: usize, n: usize| -> Option<Ray> {
        let mut common = rays[p].zeros.clone();
        common.intersect_with(&rays[n].zeros);
        if common.count_ones(..) < need {
            return None;
        }
        let blocked = rays
            .iter()
            .enumerate()
            .any(|(k, r)| k != p && k != n && common.is_subset(&r.zeros));
        if blocked {
            return None;
        }
        let mut v = linalg::scale(&rays[n].v, &vals[p]);
        linalg::axpy(&mut v, &-&vals[n], &rays[p].v);
        common.insert(row_idx);
        Some(Ray { v: linalg::primitive(&v), zeros: common })
    };
    let new_rays: Vec<Ray> = if pos.len() * neg.len() >= PAR_THRESHOLD {
        pos.par_iter()
            .map(|&p| neg.iter().filter_map(|&n| adjacent(p, n)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        pos.iter().flat_map(|&p| neg.iter().filter_map(move |&n| adjacent(p, n))).collect()
    };

    let mut out: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
    for (mut r, v) in rays.into_iter().zip(vals) {
        if v.is_zero() {
            r.zeros.insert(row_idx);
            out.push(r);
        } else if v.is_positive() {
            out.push(r);
        }
    }
    out.extend(new_rays);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Rational::from_int(x)).collect()
    }

    fn sorted(mut rays: Vec<Vector>) -> Vec<Vector> {
        rays.sort();
        rays
    }

    #[test]
    fn orthant_rays() {
        let g = cone_generators(2, &[v(&[1, 0]), v(&[0, 1])], &[]);
        assert!(g.lineality.is_empty());
        assert_eq!(sorted(g.rays), vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn square_pyramid_cone() {
        // Homogenized unit square: t ≥ 0 plus 0 ≤ x ≤ t, 0 ≤ y ≤ t.
        let rows = [v(&[0, 1, 0]), v(&[1, -1, 0]), v(&[0, 0, 1]), v(&[1, 0, -1])];
        let g = cone_generators(3, &rows, &[]);
        assert_eq!(
            sorted(g.rays),
            vec![v(&[1, 0, 0]), v(&[1, 0, 1]), v(&[1, 1, 0]), v(&[1, 1, 1])]
        );
    }

    #[test]
    fn half_plane_has_lineality() {
        let g = cone_generators(2, &[v(&[1, 0])], &[]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays, vec![v(&[1, 0])]);
    }

    #[test]
    fn equation_restricts() {
        let g = cone_generators(3, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], &[v(&[1, 1, -1])]);
        assert_eq!(sorted(g.rays), vec![v(&[0, 1, 1]), v(&[1, 0, 1])]);
    }
}
