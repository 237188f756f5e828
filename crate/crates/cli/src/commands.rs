use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hfree::ef::{
    balas_union, ef_from_hrep, ef_from_vrep, ef_project, ef_validate, intersect_concat, martin_forest_ef,
    polar_route_stages, ExtendedFormulation, MARTIN_SIZE_CONSTANT,
};
use hfree::families::{
    box_family, facets_family, odd_set_family, oddcut_pm_family, subtour_family, InequalityFamily,
};
use hfree::geometry::Polytope;
use hfree::hfree::{compute_qh, hfree_optimize, hfree_report, hfree_separate, ReportOptions, SeparationAnswer};
use hfree::io::{self, ParseError};
use hfree::linalg::{self, Vector};
use hfree::reductions::{occurrence_violations, restrict_3cnf_with, stable_set_to_2sat, verify_reduction_with, Padding};
use hfree::xc::{slack_matrix, xc_bounds};
use hfree::zoo::{self, Caps, CnfFormula, Graph, MatchingVariant};
use hfree::{Error, Rational};

use crate::{Cli, Command, Common, EfCommand, FamilyArgs, FamilyKind, Variant, ZooArgs, ZooKind};

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, ParseError),
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::SizeLimit { .. }) => 2,
            Failure::Core(Error::EmptyPolytope) => 3,
            Failure::Verification(_) => 4,
            _ => 1,
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Zoo(a) => zoo_cmd(c, a),
        Command::Qh(a) => {
            let p = load_polytope(&a.polytope)?;
            let fam = family(&a.family, &p.1)?;
            let opts = ReportOptions { certificates: a.certificates, timings: false, budget: c.budget };
            let report = hfree_report(&p.0, &p.1, fam.as_ref(), &opts)?;
            emit(c, &if a.json { report.to_json() + "\n" } else { report.to_text() })
        }
        Command::Separate(a) => separate_cmd(c, a),
        Command::Optimize(a) => optimize_cmd(c, a),
        Command::Xcbounds(a) => {
            let (name, p) = load_polytope(&a.polytope)?;
            let b = xc_bounds(&p, c.budget)?;
            if let Some(path) = &a.slack {
                let m = p.minimal()?;
                let text = match (m.hrep(), m.vrep()) {
                    (Some(h), Some(v)) => slack_matrix(h, v)?.to_string(),
                    _ => String::new(),
                };
                write_file(path, &text)?;
            }
            let mut s = format!("instance: {name}\nxc_lb: {}\nxc_ub: {}\n", b.lb, b.ub);
            let _ = writeln!(s, "rc_exact: {}", b.exact);
            if let Some(cover) = &b.cover {
                let _ = writeln!(s, "rc_lb: {}\nrc_ub: {}\nfooling_set: {}", cover.lb, cover.ub, cover.fooling_set.len());
            }
            emit(c, &s)
        }
        Command::Ef(e) => ef_cmd(c, e),
        Command::Reduce(a) => {
            let phi = load_cnf(&a.cnf)?;
            let padding = if a.pad { Padding::Duplicate } else { Padding::None };
            let (psi, map) = restrict_3cnf_with(&phi, padding)?;
            if let Some(path) = &a.map {
                write_file(path, &io::write_map(&map))?;
            }
            eprintln!(
                "source: {} vars, {} clauses; target: {} vars, {} clauses; occurrence violations: {}",
                phi.num_vars(),
                phi.clauses().len(),
                psi.num_vars(),
                psi.clauses().len(),
                occurrence_violations(&psi).len()
            );
            emit(c, &io::write_dimacs(&psi))
        }
        Command::TwoSat(a) => emit(c, &io::write_dimacs(&stable_set_to_2sat(&load_graph(&a.graph)?))),
        Command::Verify(a) => {
            let phi = load_cnf(&a.phi)?;
            let psi = load_cnf(&a.psi)?;
            let map = parse_file(&a.map, io::parse_map)?;
            let ok = verify_reduction_with(&phi, &psi, &map, &caps(c))?;
            emit(c, &format!("verdict: {ok}\n"))?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification("projection of sat(psi) differs from sat(phi)".into()))
            }
        }
    }
}

fn caps(c: &Common) -> Caps {
    match c.cap {
        None => Caps::default(),
        Some(k) => {
            let k = usize::try_from(k).unwrap_or(usize::MAX);
            Caps { subset: k, tours: k, sat_vars: k }
        }
    }
}

fn emit(c: &Common, text: &str) -> Outcome {
    match &c.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn parse_file<T>(path: &Path, parse: impl Fn(&str) -> Result<T, ParseError>) -> Outcome<T> {
    parse(&read(path)?).map_err(|e| Failure::Parse(path.to_path_buf(), e))
}

fn load_polytope(path: &Path) -> Outcome<(String, Polytope)> {
    let f = parse_file(path, io::parse_polytope)?;
    Ok((f.name.clone(), f.polytope()))
}

fn load_graph(path: &Path) -> Outcome<Graph> {
    parse_file(path, io::parse_graph)
}

fn load_cnf(path: &Path) -> Outcome<CnfFormula> {
    parse_file(path, io::parse_dimacs)
}

/// Reads an EF file, or a polytope file turned into its trivial lift.
fn load_ef(path: &Path) -> Outcome<ExtendedFormulation> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("EF") {
        return io::parse_ef(&text).map_err(|e| Failure::Parse(path.to_path_buf(), e));
    }
    let f = io::parse_polytope(&text).map_err(|e| Failure::Parse(path.to_path_buf(), e))?;
    let mut ef = match (&f.vrep, &f.hrep) {
        (Some(v), _) => ef_from_vrep(v),
        (None, Some(h)) => ef_from_hrep(h),
        (None, None) => unreachable!("parser requires a section"),
    };
    ef.name = f.name;
    Ok(ef)
}

fn zoo_cmd(c: &Common, a: &ZooArgs) -> Outcome {
    let caps = caps(c);
    let graph = || -> Outcome<Graph> {
        let path = a.graph.as_ref().ok_or_else(|| Failure::Usage(format!("{:?} needs --graph", a.kind)))?;
        load_graph(path)
    };
    let n = || a.n.ok_or_else(|| Failure::Usage(format!("{:?} needs --n", a.kind)));
    let matching = |v| -> Outcome<_> { Ok(zoo::enumerate_matchings_with(&graph()?, v, &caps)?) };
    let (default_name, v) = match a.kind {
        ZooKind::Matching => {
            let variant = match a.variant {
                Variant::All => MatchingVariant::All,
                Variant::Perfect => MatchingVariant::Perfect,
                Variant::Induced => MatchingVariant::Induced,
                Variant::Maximal => MatchingVariant::Maximal,
            };
            ("matching", matching(variant)?)
        }
        ZooKind::PerfectMatching => ("perfect-matching", matching(MatchingVariant::Perfect)?),
        ZooKind::InducedMatching => ("induced-matching", matching(MatchingVariant::Induced)?),
        ZooKind::MaximalMatching => ("maximal-matching", matching(MatchingVariant::Maximal)?),
        ZooKind::Tours => ("tours", zoo::enumerate_tours_with(n()?, &caps)?),
        ZooKind::StableSets => ("stable-sets", zoo::enumerate_stable_sets_with(&graph()?, &caps)?),
        ZooKind::Sat => {
            let path = a.cnf.as_ref().ok_or_else(|| Failure::Usage("sat needs --cnf".into()))?;
            ("sat", zoo::enumerate_sat_with(&load_cnf(path)?, &caps)?)
        }
        ZooKind::Forests => ("forests", zoo::enumerate_forests_with(n()?, &caps)?),
        ZooKind::Mpm => ("mpm", zoo::enumerate_mpm_with(&graph()?, a.k, a.exact, &caps)?),
    };
    let name = a.name.clone().unwrap_or_else(|| default_name.to_string());
    emit(c, &io::write_polytope(&name, v.dim, None, Some(&v)))
}

fn triangular_root(d: usize) -> Option<usize> {
    (0..=d + 1).find(|n| n * n.saturating_sub(1) / 2 == d)
}

fn complete_for(edges: usize, what: &str) -> Outcome<Graph> {
    triangular_root(edges)
        .map(Graph::complete)
        .ok_or_else(|| Failure::Usage(format!("{what}: {edges} coordinates are not the edges of a complete graph; pass --graph")))
}

fn family(a: &FamilyArgs, p: &Polytope) -> Outcome<Box<dyn InequalityFamily>> {
    let d = p.dim();
    let graph = |edges: usize, what: &str| -> Outcome<Graph> {
        let g = match &a.graph {
            Some(path) => load_graph(path)?,
            None => complete_for(edges, what)?,
        };
        if g.m() != edges {
            return Err(Failure::Usage(format!("{what}: graph has {} edges, polytope needs {edges}", g.m())));
        }
        Ok(g)
    };
    Ok(match a.family {
        FamilyKind::OddSet => Box::new(odd_set_family(&graph(d, "odd-set")?)),
        FamilyKind::OddCutPm => {
            if !d.is_multiple_of(2) {
                return Err(Failure::Usage("odd-cut-pm needs a polytope on two edge blocks".into()));
            }
            Box::new(oddcut_pm_family(&graph(d / 2, "odd-cut-pm")?))
        }
        FamilyKind::Subtour => {
            let n = match &a.graph {
                Some(path) => load_graph(path)?.n(),
                None => complete_for(d, "subtour")?.n(),
            };
            Box::new(subtour_family(n)?)
        }
        FamilyKind::Box => Box::new(box_family(d)),
        FamilyKind::Facets => Box::new(facets_family(p)?),
    })
}

fn describe(ans: &SeparationAnswer) -> String {
    match ans {
        SeparationAnswer::Inside => "inside".into(),
        SeparationAnswer::ViolatedByH(r) => format!("violated-by-H: {} ({})", r.row, r.kind),
        SeparationAnswer::ViolatedByQH(r) => format!("violated-by-QH: {r}"),
    }
}

fn separate_cmd(c: &Common, a: &crate::SeparateArgs) -> Outcome {
    let (_, p) = load_polytope(&a.polytope)?;
    let fam = family(&a.family, &p)?;
    let qh = compute_qh(&p, fam.as_ref())?;
    if let Some(path) = &a.point {
        let x = parse_file(path, io::parse_objective)?;
        let line = match hfree_separate(&x, fam.as_ref(), &qh) {
            Ok(ans) => describe(&ans),
            Err(Error::AffineHullViolation(e)) => format!("violated-equation: {e}"),
            Err(e) => return Err(e.into()),
        };
        return emit(c, &format!("{line}\n"));
    }
    let count = a.random.ok_or_else(|| Failure::Usage("separate needs --point or --random".into()))?;
    let verts = p.vertices()?;
    if verts.is_empty() {
        return Err(Error::EmptyPolytope.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let (mut inside, mut by_h, mut by_qh) = (0usize, 0usize, 0usize);
    let mut s = String::new();
    for i in 0..count {
        let x = random_affine_point(&mut rng, &verts);
        let ans = hfree_separate(&x, fam.as_ref(), &qh)?;
        match ans {
            SeparationAnswer::Inside => inside += 1,
            SeparationAnswer::ViolatedByH(_) => by_h += 1,
            SeparationAnswer::ViolatedByQH(_) => by_qh += 1,
        }
        let _ = writeln!(s, "point {i}: {}", describe(&ans));
    }
    let _ = writeln!(s, "inside: {inside}\nviolated-by-H: {by_h}\nviolated-by-QH: {by_qh}");
    emit(c, &s)
}

/// Affine combination of the vertices with weights in `[-1, 3]`, so the
/// point lies in the affine hull and may fall outside the polytope.
fn random_affine_point(rng: &mut ChaCha8Rng, verts: &[Vector]) -> Vector {
    loop {
        let w: Vec<Rational> = verts.iter().map(|_| Rational::new(rng.gen_range(-4..=12), 4)).collect();
        let total = w.iter().fold(Rational::zero(), |acc, x| &acc + x);
        if total.is_zero() {
            continue;
        }
        let mut x = linalg::zeros(verts[0].len());
        for (v, wi) in verts.iter().zip(&w) {
            linalg::axpy(&mut x, &(wi / &total), v);
        }
        return x;
    }
}

fn optimize_cmd(c: &Common, a: &crate::OptimizeArgs) -> Outcome {
    let (name, p) = load_polytope(&a.polytope)?;
    let fam = family(&a.family, &p)?;
    let obj = parse_file(&a.objective, io::parse_objective)?;
    if obj.len() != p.dim() {
        return Err(Failure::Usage(format!("objective has {} entries, polytope dimension is {}", obj.len(), p.dim())));
    }
    let c_max: Vector = if a.minimize { obj.iter().map(|x| -x).collect() } else { obj.clone() };
    let qh = compute_qh(&p, fam.as_ref())?;
    let res = hfree_optimize(&c_max, fam.as_ref(), &qh, None)?;
    let value = if a.minimize { -&res.value } else { res.value.clone() };
    let mut s = format!("instance: {name}\nsense: {}\n", if a.minimize { "min" } else { "max" });
    let _ = writeln!(s, "value: {value}");
    let point: Vec<String> = res.point.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(s, "point: {}", point.join(" "));
    let _ = writeln!(s, "rounds: {}\ncuts: {}", res.rounds, res.cuts.len());
    let mut mismatch = None;
    if a.check_brute_force {
        let best = p
            .vertices()?
            .iter()
            .map(|v| linalg::dot(&c_max, v))
            .max()
            .ok_or(Error::EmptyPolytope)?;
        let best = if a.minimize { -&best } else { best };
        let _ = writeln!(s, "brute_force: {best}");
        if best != value {
            mismatch = Some(format!("cutting-plane value {value} differs from brute force {best}"));
        }
    }
    emit(c, &s)?;
    match mismatch {
        Some(m) => Err(Failure::Verification(m)),
        None => Ok(()),
    }
}

fn ef_cmd(c: &Common, e: &EfCommand) -> Outcome {
    match e {
        EfCommand::Balas { first, second } => {
            let (a, b) = (load_ef(first)?, load_ef(second)?);
            let u = balas_union(&a, &b)?;
            let head = format!("# size {} (inputs {} + {})\n", u.size(), a.size(), b.size());
            emit(c, &(head + &io::write_ef(&u)))
        }
        EfCommand::Intersect { first, second } => {
            let (a, b) = (load_ef(first)?, load_ef(second)?);
            let u = intersect_concat(&a, &b)?;
            let head = format!("# size {} (inputs {} + {})\n", u.size(), a.size(), b.size());
            emit(c, &(head + &io::write_ef(&u)))
        }
        EfCommand::PolarIntersect { first, second } => {
            let (_, p1) = load_polytope(first)?;
            let (_, p2) = load_polytope(second)?;
            let r1 = p1.minimal_hrep()?.inequalities.len();
            let r2 = p2.minimal_hrep()?.inequalities.len();
            let route = polar_route_stages(&p1, &p2)?;
            let center: Vec<String> = route.center.iter().map(|x| x.to_string()).collect();
            let mut head = format!("# size {} (facets {r1} + {r2})\n", route.formulation.size());
            let _ = writeln!(head, "# center {}", center.join(" "));
            let _ = writeln!(head, "# polar lifts {} + {}, union {}", route.polar_sizes.0, route.polar_sizes.1, route.union_size);
            emit(c, &(head + &io::write_ef(&route.formulation)))
        }
        EfCommand::Martin { n } => {
            let ef = martin_forest_ef(*n)?;
            let bound = MARTIN_SIZE_CONSTANT * n * n * n;
            let head = format!("# size {} rows {} (bound {MARTIN_SIZE_CONSTANT}n^3 = {bound})\n", ef.size(), ef.rows());
            emit(c, &(head + &io::write_ef(&ef)))
        }
        EfCommand::Project { formulation } => {
            let ef = load_ef(formulation)?;
            let p = ef_project(&ef)?;
            let v = p.vrep().cloned().ok_or(Error::EmptyPolytope)?;
            let name = if ef.name.is_empty() { "projection".to_string() } else { ef.name.clone() };
            emit(c, &io::write_polytope(&name, v.dim, None, Some(&v)))
        }
        EfCommand::Validate { formulation, polytope } => {
            let ef = load_ef(formulation)?;
            let (_, p) = load_polytope(polytope)?;
            let ok = ef_validate(&ef, &p)?;
            emit(c, &format!("valid: {ok}\n"))?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification("projection differs from the polytope".into()))
            }
        }
    }
}
