use std::collections::BTreeSet;

use hfree::ef::*;
use hfree::families::*;
use hfree::geometry::lp::certificate_holds;
use hfree::geometry::*;
use hfree::hfree::*;
use hfree::linalg;
use hfree::reductions::*;
use hfree::xc::*;
use hfree::zoo::*;
use hfree::Rational;
use proptest::prelude::*;

fn point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=3), dim).prop_map(|v| v.into_iter().map(|(n, d)| Rational::new(n, d)).collect())
}

fn polytope(dim: usize, max_pts: usize) -> impl Strategy<Value = Polytope> {
    prop::collection::vec(point(dim), 1..=max_pts).prop_map(move |pts| Polytope::from_vertices(dim, pts).unwrap())
}

fn full_dim_polygon() -> impl Strategy<Value = Polytope> {
    polytope(2, 8).prop_filter("full-dimensional", |p| p.affine_dim().unwrap() == 2)
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        prop::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

fn support(max: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(any::<bool>(), c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representation_round_trip(p in polytope(3, 12)) {
        let v = p.minimal().unwrap().vrep().unwrap().clone();
        let h = vrep_to_hrep(&v).unwrap();
        prop_assert_eq!(hrep_to_vrep(&h).unwrap(), v);
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_points(p in polytope(3, 10), extra in prop::collection::vec((point(3), -4i64..=8), 0..4)) {
        let mut h = p.minimal_hrep().unwrap();
        for (a, b) in extra {
            let row = LinearInequality::new(a, Rational::from_int(b));
            if p.vertices().unwrap().iter().all(|v| row.is_satisfied(v)) {
                h.inequalities.push(row);
            }
        }
        let once = minimize_hrep(&h).unwrap();
        prop_assert_eq!(minimize_hrep(&once).unwrap(), once.clone());
        prop_assert!(polytopes_equal(&Polytope::from_hrep(once), &Polytope::from_hrep(h)).unwrap());
    }

    #[test]
    fn polar_is_an_involution_exchanging_counts(p in full_dim_polygon()) {
        let polar = polar_dual(&p, None).unwrap();
        let nv = p.vertices().unwrap().len();
        let nf = p.minimal_hrep().unwrap().inequalities.len();
        prop_assert_eq!(polar.vertices().unwrap().len(), nf);
        prop_assert_eq!(polar.minimal_hrep().unwrap().inequalities.len(), nv);
        let center = linalg::scale(
            &p.vertices().unwrap().iter().fold(linalg::zeros(2), |acc, v| linalg::add(&acc, v)),
            &Rational::new(1, nv as i64),
        );
        let back = polar_dual(&polar, Some(&center)).unwrap();
        prop_assert!(polytopes_equal(&back, &p).unwrap());
    }

    #[test]
    fn lp_strong_duality(p in polytope(3, 10), c in point(3)) {
        let h = p.minimal_hrep().unwrap();
        let sol = lp_optimize(&c, &h).unwrap().optimal().unwrap();
        let best = p.vertices().unwrap().iter().map(|v| linalg::dot(&c, v)).max().unwrap();
        prop_assert_eq!(&sol.value, &best);
        let ineqs: Vec<&LinearInequality> = h.inequalities.iter().collect();
        let eqs: Vec<&LinearEquation> = h.equations.iter().collect();
        prop_assert!(certificate_holds(&c, &ineqs, &eqs, &sol));
    }

    #[test]
    fn slack_is_nonnegative_and_rc_below_trivial_bound(p in polytope(3, 8)) {
        let m = p.minimal().unwrap();
        if let (Some(h), Some(v)) = (m.hrep(), m.vrep()) {
            let s = slack_matrix(h, v).unwrap();
            prop_assert!(s.entries.iter().flatten().all(|x| !x.is_negative()));
            if s.support().iter().flatten().any(|&b| b) {
                let rc = rectangle_cover_number(&s, DEFAULT_BUDGET);
                prop_assert!(rc.lb <= rc.ub);
                prop_assert!(rc.ub <= (s.rows().min(s.cols())) as u64);
                prop_assert!(verify_cover(&s.support(), &rc));
            }
        }
        let b = xc_bounds(&p, None).unwrap();
        prop_assert!(b.lb <= b.ub);
    }

    #[test]
    fn deleting_a_column_never_raises_rc(s in support(5), col in any::<prop::sample::Index>()) {
        prop_assume!(s.iter().flatten().any(|&b| b));
        let c = col.index(s[0].len());
        let smaller: Vec<Vec<bool>> = s.iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &b)| b).collect()).collect();
        prop_assume!(smaller.iter().flatten().any(|&b| b));
        let full = rectangle_cover_support(&s, DEFAULT_BUDGET).exact_value().unwrap();
        let less = rectangle_cover_support(&smaller, DEFAULT_BUDGET).exact_value().unwrap();
        prop_assert!(less <= full);
    }

    #[test]
    fn exact_cover_is_no_worse_than_greedy(s in support(6)) {
        prop_assume!(s.iter().flatten().any(|&b| b));
        let greedy = rectangle_cover_support(&s, 0);
        let exact = rectangle_cover_support(&s, DEFAULT_BUDGET);
        prop_assert!(exact.exact);
        prop_assert!(exact.ub <= greedy.ub);
        prop_assert!(greedy.lb <= exact.ub);
        prop_assert!(verify_cover(&s, &greedy) && verify_cover(&s, &exact));
    }

    #[test]
    fn balas_union_bound_and_projection(a in polytope(2, 5), b in polytope(2, 5), lift_a in any::<bool>()) {
        let ea = if lift_a { ef_from_hrep(&a.minimal_hrep().unwrap()) } else { ef_from_vrep(a.vrep().unwrap()) };
        let eb = ef_from_vrep(b.vrep().unwrap());
        let u = balas_union(&ea, &eb).unwrap();
        prop_assert!(u.size() <= ea.size() + eb.size() + 1);
        let mut pts = a.vertices().unwrap();
        pts.extend(b.vertices().unwrap());
        prop_assert!(ef_validate(&u, &Polytope::from_vertices(2, pts).unwrap()).unwrap());
    }

    #[test]
    fn polar_round_trip_keeps_formulation_size(p in full_dim_polygon()) {
        let ef = ef_from_vrep(p.vrep().unwrap());
        let min = ef_from_vrep(p.minimal().unwrap().vrep().unwrap());
        let vs = p.vertices().unwrap();
        let center = linalg::scale(
            &vs.iter().fold(linalg::zeros(2), |acc, v| linalg::add(&acc, v)),
            &Rational::new(1, vs.len() as i64),
        );
        let twice = ef_polar(&ef_polar(&min, Some(&center)).unwrap(), Some(&center)).unwrap();
        prop_assert_eq!(twice.size(), min.size());
        prop_assert!(ef_validate(&twice, &p).unwrap());
        prop_assert!(ef_validate(&ef, &p).unwrap());
    }

    #[test]
    fn matching_variants_nest(g in graph(6)) {
        let set = |v| -> BTreeSet<Vec<Rational>> { enumerate_matchings(&g, v).unwrap().vertices.into_iter().collect() };
        let all = set(MatchingVariant::All);
        let induced = set(MatchingVariant::Induced);
        let maximal = set(MatchingVariant::Maximal);
        let perfect = set(MatchingVariant::Perfect);
        prop_assert!(induced.is_subset(&all));
        prop_assert!(maximal.is_subset(&all));
        prop_assert!(perfect.is_subset(&maximal));
        for v in &all {
            let edges: Vec<usize> = (0..v.len()).filter(|&e| v[e].is_one()).collect();
            prop_assert!(is_matching(&g, &edges));
        }
    }

    #[test]
    fn families_are_valid_for_their_polytopes(g in graph(6)) {
        let odd = odd_set_family(&g);
        for v in enumerate_matchings(&g, MatchingVariant::All).unwrap().vertices {
            prop_assert!(odd.separate(&v).is_none());
        }
        let oc = oddcut_pm_family(&g);
        for v in enumerate_mpm(&g, 0, false).unwrap().vertices {
            prop_assert!(oc.separate(&v).is_none());
        }
    }

    #[test]
    fn separation_none_iff_all_rows_hold(g in graph(6), seed in prop::collection::vec(0i64..=4, 15)) {
        let x: Vec<Rational> = (0..g.m()).map(|e| Rational::new(seed[e % seed.len()], 4)).collect();
        for fam in [&odd_set_family(&g) as &dyn InequalityFamily, &oddcut_pm_family(&g)] {
            let y: Vec<Rational> = (0..fam.ambient_dim()).map(|i| x.get(i).cloned().unwrap_or_else(|| Rational::new(seed[i % seed.len()], 4))).collect();
            let all_hold = fam.enumerate().unwrap().iter().all(|r| r.row.is_satisfied(&y));
            let cut = fam.separate(&y);
            prop_assert_eq!(cut.is_none(), all_hold);
            if let Some(r) = cut {
                prop_assert!(!r.row.is_satisfied(&y));
            }
        }
    }

    #[test]
    fn stable_sets_equal_two_sat_solutions(g in graph(8)) {
        prop_assert_eq!(enumerate_sat(&stable_set_to_2sat(&g)).unwrap(), enumerate_stable_sets(&g).unwrap());
    }

    #[test]
    fn restricted_formulas_obey_the_cap(clauses in prop::collection::vec(prop::collection::btree_set(1i32..=4, 3), 1..=6), signs in prop::collection::vec(any::<bool>(), 18)) {
        let cls: Vec<Vec<i32>> = clauses.iter().enumerate().map(|(i, c)| {
            c.iter().enumerate().map(|(j, &v)| if signs[(3 * i + j) % signs.len()] { -v } else { v }).collect()
        }).collect();
        let phi = CnfFormula::new(4, cls).unwrap();
        let (psi, map) = restrict_3cnf(&phi).unwrap();
        prop_assert!(occurrence_violations(&psi).is_empty());
        prop_assert_eq!(enumerate_sat(&psi).unwrap().is_empty(), enumerate_sat(&phi).unwrap().is_empty());
        prop_assert!(verify_reduction(&phi, &psi, &map).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn qh_deletion_is_sound_and_order_free(g in graph(5)) {
        let q = Polytope::from_vrep(enumerate_matchings(&g, MatchingVariant::All).unwrap());
        let h = box_family(g.m());
        let qh = compute_qh(&q, &h).unwrap();
        let mut rows: Vec<LinearInequality> = h.enumerate().unwrap().into_iter().map(|r| r.row).collect();
        rows.extend(qh.retained_rows());
        let rebuilt = HRep::new(g.m(), rows, qh.equations.clone()).unwrap();
        prop_assert!(polytopes_equal(&Polytope::from_hrep(rebuilt), &q).unwrap());

        let facets = q.minimal_hrep().unwrap();
        let mut solo: Vec<LinearInequality> = facets.inequalities.iter().rev()
            .filter(|f| !facet_redundant_wrt(f, &h, &facets.equations).unwrap().0)
            .cloned()
            .collect();
        solo.reverse();
        prop_assert_eq!(solo, qh.retained_rows());
    }

    #[test]
    fn hfree_optimize_matches_the_full_lp(g in graph(5), c in prop::collection::vec((-5i64..=5, 1i64..=3), 10)) {
        let q = Polytope::from_vrep(enumerate_matchings(&g, MatchingVariant::All).unwrap());
        let h = odd_set_family(&g);
        let qh = compute_qh(&q, &h).unwrap();
        let obj: Vec<Rational> = (0..g.m()).map(|e| Rational::new(c[e].0, c[e].1)).collect();
        let res = hfree_optimize(&obj, &h, &qh, None).unwrap();
        let full = lp_optimize(&obj, &q.minimal_hrep().unwrap()).unwrap().optimal().unwrap();
        prop_assert_eq!(res.value, full.value);
    }
}
