//! Dense exact linear algebra over [`Rational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> Vector {
    a.iter().map(|x| x * s).collect()
}

/// `a += s * b`
pub fn axpy(a: &mut [Rational], s: &Rational, b: &[Rational]) {
    if s.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += s * y;
        }
    }
}

/// Reduced row echelon form. Pivots are chosen left to right; the returned
/// rows are the nonzero rows, each with a leading 1 at the listed pivot column.
pub fn rref(rows: &[Vector], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.iter().map(|r| r.to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            for x in m[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Matrix {
    let (r, pivots) = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = zeros(ncols);
        v[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Indices of a maximal linearly independent subset of `rows`, scanned in order.
pub fn independent_rows(rows: &[Vector], ncols: usize) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vector)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (p, e) in &echelon {
            if !v[*p].is_zero() {
                let f = -v[*p].clone();
                axpy(&mut v, &f, e);
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].recip();
            let v = scale(&v, &inv);
            echelon.push((p, v));
            chosen.push(idx);
            if chosen.len() == ncols {
                break;
            }
        }
    }
    chosen
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &[Vector]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for x in aug[c].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vector], v: &[Rational]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose(m: &[Vector], ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Solves `m x = b` for some `x` (any solution), or `None` if inconsistent.
pub fn solve_any(m: &[Vector], b: &[Rational], ncols: usize) -> Option<Vector> {
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

fn lcm_of_denominators(v: &[Rational]) -> BigInt {
    let mut l = BigInt::one();
    for x in v {
        if !x.is_integer() {
            l = l.lcm(&x.denom());
        }
    }
    l
}

/// Positive multiple of `v` with coprime integer entries. Zero stays zero.
pub fn primitive(v: &[Rational]) -> Vector {
    if let Some(out) = primitive_small(v) {
        return out;
    }
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from(x / &g)).collect()
}

fn primitive_small(v: &[Rational]) -> Option<Vector> {
    let mut l: i128 = 1;
    for x in v {
        let (_, d) = x.as_i64_pair()?;
        let d = d as i128;
        let g = l.gcd(&d);
        l = (l / g).checked_mul(d)?;
        if l > i64::MAX as i128 {
            return None;
        }
    }
    let mut ints = Vec::with_capacity(v.len());
    let mut g: i128 = 0;
    for x in v {
        let (n, d) = x.as_i64_pair()?;
        let val = (n as i128).checked_mul(l / d as i128)?;
        g = g.gcd(&val);
        ints.push(val);
    }
    if g == 0 {
        return Some(v.to_vec());
    }
    Some(
        ints.into_iter()
            .map(|x| {
                let y = x / g;
                if y > i64::MIN as i128 && y <= i64::MAX as i128 {
                    Rational::from_int(y as i64)
                } else {
                    Rational::from(BigInt::from(y))
                }
            })
            .collect(),
    )
}
