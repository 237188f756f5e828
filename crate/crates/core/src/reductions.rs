//! Formula transformations between satisfiability polytopes: the
//! occurrence-restricting rewrite of 3-CNF formulas and the 2-SAT encoding
//! of stable sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{polytopes_equal, Polytope, VRep};
use crate::zoo::{enumerate_sat_with, Caps, CnfFormula, Graph};

/// Origin of a target variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Copy of source variable `v` (1-based) carrying its value.
    Copy(usize),
    /// Copy carrying the negation of source variable `v`.
    NegatedCopy(usize),
    /// Padding variable with no source counterpart.
    Padding,
}

/// Links a target formula back to its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub source_vars: usize,
    pub target_vars: usize,
    /// `projection[i]` is the 1-based target variable read as source
    /// variable `i + 1`.
    pub projection: Vec<usize>,
    /// `origins[t]` describes target variable `t + 1`.
    pub origins: Vec<Origin>,
}

impl ReductionMap {
    pub fn identity(n: usize) -> Self {
        ReductionMap {
            source_vars: n,
            target_vars: n,
            projection: (1..=n).collect(),
            origins: (1..=n).map(Origin::Copy).collect(),
        }
    }

    /// Source assignment read off a target assignment.
    pub fn project(&self, target: &[bool]) -> Vec<bool> {
        self.projection.iter().map(|&t| target[t - 1]).collect()
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.projection.len() != self.source_vars {
            return Err(Error::input(format!(
                "projection lists {} variables for {} source variables",
                self.projection.len(),
                self.source_vars
            )));
        }
        if self.origins.len() != self.target_vars {
            return Err(Error::input(format!(
                "{} origins for {} target variables",
                self.origins.len(),
                self.target_vars
            )));
        }
        if let Some(&t) = self.projection.iter().find(|&&t| t == 0 || t > self.target_vars) {
            return Err(Error::input(format!("projection coordinate {t} outside 1..={}", self.target_vars)));
        }
        let bad = self.origins.iter().find(|o| match o {
            Origin::Copy(v) | Origin::NegatedCopy(v) => *v == 0 || *v > self.source_vars,
            Origin::Padding => false,
        });
        if let Some(o) = bad {
            return Err(Error::input(format!("origin {o:?} outside 1..={}", self.source_vars)));
        }
        Ok(())
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Copy(v) => write!(f, "{v}"),
            Origin::NegatedCopy(v) => write!(f, "-{v}"),
            Origin::Padding => write!(f, "0"),
        }
    }
}

/// How the two-literal gadget clauses are emitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Padding {
    /// Kept at width two, so every variable stays within two positive and
    /// one negative occurrence.
    #[default]
    None,
    /// Each clause `(a ∨ b)` becomes `(a ∨ b ∨ z)` and `(a ∨ b ∨ ¬z)` with a
    /// fresh `z`. All clauses then have width three, but the gadget
    /// variables occur twice as often.
    Duplicate,
}

/// Rewrites a 3-CNF formula so that every variable occurs at most twice
/// positively and at most once negatively.
///
/// Each positive occurrence of `x_i` gets its own copy `x_i^j` and each
/// negative occurrence its own copy `y_i^j` standing for `¬x_i`. The
/// implication cycle `x_i^1 ⇒ … ⇒ x_i^k ⇒ ¬y_i^1 ⇒ … ⇒ ¬y_i^l ⇒ x_i^1`
/// makes all copies agree. A variable without positive (or negative)
/// occurrences still gets one unused copy so the cycle closes. Source
/// variable `i` is read from `x_i^k`.
///
/// Numbering: positive copies in clause order, then negative copies in
/// clause order, then the unused copies by variable, then padding.
pub fn restrict_3cnf(phi: &CnfFormula) -> Result<(CnfFormula, ReductionMap)> {
    restrict_3cnf_with(phi, Padding::None)
}

pub fn restrict_3cnf_with(phi: &CnfFormula, padding: Padding) -> Result<(CnfFormula, ReductionMap)> {
    if let Some(c) = phi.clauses().iter().find(|c| c.len() != 3) {
        return Err(Error::MalformedInput(format!("clause {c:?} does not have width 3")));
    }
    let n = phi.num_vars();
    let mut origins: Vec<Origin> = Vec::new();
    let mut xs: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut ys: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let new_var = |origins: &mut Vec<Origin>, o: Origin| -> usize {
        origins.push(o);
        origins.len()
    };
    let mut clauses: Vec<Vec<i32>> = phi.clauses().iter().map(|c| vec![0; c.len()]).collect();
    for (ci, c) in phi.clauses().iter().enumerate() {
        for (p, &l) in c.iter().enumerate() {
            if l > 0 {
                let v = l as usize;
                let t = new_var(&mut origins, Origin::Copy(v));
                xs[v].push(t);
                clauses[ci][p] = t as i32;
            }
        }
    }
    for (ci, c) in phi.clauses().iter().enumerate() {
        for (p, &l) in c.iter().enumerate() {
            if l < 0 {
                let v = l.unsigned_abs() as usize;
                let t = new_var(&mut origins, Origin::NegatedCopy(v));
                ys[v].push(t);
                clauses[ci][p] = t as i32;
            }
        }
    }
    for v in 1..=n {
        if xs[v].is_empty() {
            xs[v].push(new_var(&mut origins, Origin::Copy(v)));
        }
        if ys[v].is_empty() {
            ys[v].push(new_var(&mut origins, Origin::NegatedCopy(v)));
        }
    }
    let mut gadget: Vec<[i32; 2]> = Vec::new();
    for v in 1..=n {
        let (x, y) = (&xs[v], &ys[v]);
        for j in 0..x.len() - 1 {
            gadget.push([-(x[j] as i32), x[j + 1] as i32]);
        }
        for j in 0..y.len() - 1 {
            gadget.push([y[j] as i32, -(y[j + 1] as i32)]);
        }
        gadget.push([-(*x.last().expect("nonempty") as i32), -(y[0] as i32)]);
        gadget.push([*y.last().expect("nonempty") as i32, x[0] as i32]);
    }
    match padding {
        Padding::None => clauses.extend(gadget.iter().map(|c| c.to_vec())),
        Padding::Duplicate => {
            for [a, b] in gadget {
                let z = new_var(&mut origins, Origin::Padding) as i32;
                clauses.push(vec![a, b, z]);
                clauses.push(vec![a, b, -z]);
            }
        }
    }
    let target_vars = origins.len();
    let projection = (1..=n).map(|v| *xs[v].last().expect("nonempty")).collect();
    let psi = CnfFormula::new(target_vars, clauses)?;
    let map = ReductionMap { source_vars: n, target_vars, projection, origins };
    Ok((psi, map))
}

/// Per-variable `(positive, negative)` occurrence counts exceeding the
/// `(2, 1)` cap, as `(variable, positive, negative)`.
pub fn occurrence_violations(f: &CnfFormula) -> Vec<(usize, usize, usize)> {
    f.occurrences()
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|(_, (p, q))| *p > 2 || *q > 1)
        .map(|(v, (p, q))| (v, p, q))
        .collect()
}

/// `⋀_{ij ∈ E} (¬x_i ∨ ¬x_j)`: satisfying assignments are exactly the
/// indicator vectors of stable sets.
pub fn stable_set_to_2sat(g: &Graph) -> CnfFormula {
    let clauses = g.edges().iter().map(|&(u, v)| vec![-(u as i32), -(v as i32)]).collect();
    CnfFormula::new(g.n(), clauses).expect("edges are within range")
}

/// Whether projecting the satisfying assignments of `psi` through `map`
/// gives exactly the satisfying assignments of `phi`, compared as
/// polytopes.
pub fn verify_reduction(phi: &CnfFormula, psi: &CnfFormula, map: &ReductionMap) -> Result<bool> {
    verify_reduction_with(phi, psi, map, &Caps::default())
}

pub fn verify_reduction_with(
    phi: &CnfFormula,
    psi: &CnfFormula,
    map: &ReductionMap,
    caps: &Caps,
) -> Result<bool> {
    map.check()?;
    if map.source_vars != phi.num_vars() || map.target_vars != psi.num_vars() {
        return Err(Error::input(format!(
            "map {}->{} does not match formulas with {} and {} variables",
            map.source_vars,
            map.target_vars,
            phi.num_vars(),
            psi.num_vars()
        )));
    }
    let source = enumerate_sat_with(phi, caps)?;
    let target = enumerate_sat_with(psi, caps)?;
    let projected: BTreeSet<_> = target
        .vertices
        .iter()
        .map(|t| map.projection.iter().map(|&k| t[k - 1].clone()).collect::<Vec<_>>())
        .collect();
    let projected = VRep::new(phi.num_vars(), projected.into_iter().collect())?;
    polytopes_equal(&Polytope::from_vrep(projected), &Polytope::from_vrep(source))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{satisfying_assignments, stable_sets};

    fn cnf(n: usize, c: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, c.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_clause_projection_count() {
        let phi = cnf(3, &[&[1, 2, 3]]);
        let (psi, map) = restrict_3cnf(&phi).unwrap();
        assert!(occurrence_violations(&psi).is_empty());
        let projected: BTreeSet<Vec<bool>> =
            satisfying_assignments(&psi).iter().map(|a| map.project(a)).collect();
        assert_eq!(projected.len(), 7);
        assert!(verify_reduction(&phi, &psi, &map).unwrap());
    }

    #[test]
    fn all_sign_patterns_stay_unsatisfiable() {
        let mut clauses = Vec::new();
        for mask in 0..8 {
            clauses.push((0..3).map(|k| if mask >> k & 1 == 1 { -(k + 1) } else { k + 1 }).collect());
        }
        let phi = CnfFormula::new(3, clauses).unwrap();
        let (psi, map) = restrict_3cnf(&phi).unwrap();
        assert!(satisfying_assignments(&psi).is_empty());
        assert!(occurrence_violations(&psi).is_empty());
        assert!(verify_reduction(&phi, &psi, &map).unwrap());
    }

    #[test]
    fn numbering_puts_positive_copies_first() {
        let phi = cnf(2, &[&[1, -2, 1]]);
        let (psi, map) = restrict_3cnf(&phi).unwrap();
        assert_eq!(psi.clauses()[0], vec![1, 3, 2]);
        assert_eq!(map.origins[..3], [Origin::Copy(1), Origin::Copy(1), Origin::NegatedCopy(2)]);
        assert_eq!(map.projection[0], 2);
    }

    #[test]
    fn duplicate_padding_is_exact_width_but_breaks_the_cap() {
        let phi = cnf(3, &[&[1, 2, -3], &[1, -2, 3]]);
        let (psi, map) = restrict_3cnf_with(&phi, Padding::Duplicate).unwrap();
        assert!(psi.clauses().iter().all(|c| c.len() == 3));
        assert!(!occurrence_violations(&psi).is_empty());
        assert!(verify_reduction(&phi, &psi, &map).unwrap());
    }

    #[test]
    fn dropping_a_chain_clause_is_detected() {
        let phi = cnf(3, &[&[1, 2, 3], &[1, -2, -3]]);
        let (psi, map) = restrict_3cnf(&phi).unwrap();
        let mut clauses = psi.clauses().to_vec();
        let k = clauses.iter().position(|c| c.len() == 2).unwrap();
        clauses.remove(k);
        let broken = CnfFormula::new(psi.num_vars(), clauses).unwrap();
        assert!(!verify_reduction(&phi, &broken, &map).unwrap());
    }

    #[test]
    fn identity_map_verifies() {
        let phi = cnf(3, &[&[1, -2, 3]]);
        assert!(verify_reduction(&phi, &phi, &ReductionMap::identity(3)).unwrap());
    }

    #[test]
    fn rejects_wrong_width() {
        let phi = cnf(2, &[&[1, 2]]);
        assert!(matches!(restrict_3cnf(&phi), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn stable_sets_as_2sat() {
        for (g, count) in [
            (Graph::complete(3), 4),
            (Graph::empty(3), 8),
            (Graph::new(2, [(1, 2)]).unwrap(), 3),
        ] {
            let f = stable_set_to_2sat(&g);
            let sat = satisfying_assignments(&f);
            assert_eq!(sat.len(), count);
            assert_eq!(sat.len(), stable_sets(&g).len());
        }
    }
}
