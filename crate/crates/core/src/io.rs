//! Line-based text formats for polytopes, graphs, CNF formulas, extended
//! formulations, reduction maps, objective vectors and slack grids.
//!
//! All rational entries are written `p/q` or `p` with no inner whitespace.
//! Outside of DIMACS input, `#` starts a comment that runs to the end of the
//! line, and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::ef::ExtendedFormulation;
use crate::geometry::{HRep, LinearEquation, LinearInequality, Polytope, VRep};
use crate::linalg::{Matrix, Vector};
use crate::rational::Rational;
use crate::reductions::{Origin, ReductionMap};
use crate::zoo::{CnfFormula, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

type Parsed<T> = std::result::Result<T, ParseError>;

struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, comment: char) -> Self {
        let mut items = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let body = raw.split(comment).next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if !toks.is_empty() {
                items.push((i + 1, toks));
            }
        }
        Lines { items, pos: 0, last_line }
    }

    fn next(&mut self, what: &str) -> Parsed<(usize, Vec<&'a str>)> {
        match self.items.get(self.pos) {
            Some(item) => {
                self.pos += 1;
                Ok(item.clone())
            }
            None => Err(ParseError::new(self.last_line, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|(_, t)| t[0])
    }

    fn finish(&self) -> Parsed<()> {
        match self.items.get(self.pos) {
            Some((line, toks)) => Err(ParseError::new(*line, format!("trailing content `{}`", toks.join(" ")))),
            None => Ok(()),
        }
    }
}

fn rational(line: usize, tok: &str) -> Parsed<Rational> {
    tok.parse().map_err(|_| ParseError::new(line, format!("invalid rational `{tok}`")))
}

fn rationals(line: usize, toks: &[&str]) -> Parsed<Vector> {
    toks.iter().map(|t| rational(line, t)).collect()
}

fn count(line: usize, tok: &str) -> Parsed<usize> {
    tok.parse().map_err(|_| ParseError::new(line, format!("invalid count `{tok}`")))
}

fn expect_keyword(line: usize, toks: &[&str], kw: &str, args: usize) -> Parsed<()> {
    if toks[0] != kw {
        return Err(ParseError::new(line, format!("expected `{kw}`, found `{}`", toks[0])));
    }
    if toks.len() != args + 1 {
        return Err(ParseError::new(line, format!("`{kw}` takes {args} argument(s), found {}", toks.len() - 1)));
    }
    Ok(())
}

fn expect_len(line: usize, got: usize, want: usize, what: &str) -> Parsed<()> {
    if got != want {
        return Err(ParseError::new(line, format!("{what} has {got} entries, expected {want}")));
    }
    Ok(())
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Contents of a polytope file; at least one representation is present.
#[derive(Clone, Debug)]
pub struct PolytopeFile {
    pub name: String,
    pub dim: usize,
    pub hrep: Option<HRep>,
    pub vrep: Option<VRep>,
}

impl PolytopeFile {
    /// Prefers the vertex list when both sections are given.
    pub fn polytope(&self) -> Polytope {
        match (&self.vrep, &self.hrep) {
            (Some(v), _) => Polytope::from_vrep(v.clone()),
            (None, Some(h)) => Polytope::from_hrep(h.clone()),
            (None, None) => Polytope::empty(self.dim),
        }
    }
}

pub fn parse_polytope(text: &str) -> Parsed<PolytopeFile> {
    let mut lines = Lines::new(text, '#');
    let (line, toks) = lines.next("POLY")?;
    if toks[0] != "POLY" || toks.len() > 2 {
        return Err(ParseError::new(line, "expected `POLY <name>`"));
    }
    let name = toks.get(1).copied().unwrap_or("").to_string();
    let (line, toks) = lines.next("DIM")?;
    expect_keyword(line, &toks, "DIM", 1)?;
    let dim = count(line, toks[1])?;

    let mut hrep = None;
    let mut vrep = None;
    loop {
        let (line, toks) = lines.next("END")?;
        match toks[0] {
            "HREP" if hrep.is_none() && vrep.is_none() => {
                expect_keyword(line, &toks, "HREP", 2)?;
                let m = count(line, toks[1])?;
                let k = count(line, toks[2])?;
                let mut ineqs = Vec::new();
                for _ in 0..m {
                    let (line, toks) = lines.next("inequality row")?;
                    expect_len(line, toks.len() - 1, dim, "inequality row")?;
                    let b = rational(line, toks[0])?;
                    ineqs.push(LinearInequality::new(rationals(line, &toks[1..])?, b));
                }
                let mut eqs = Vec::new();
                for _ in 0..k {
                    let (line, toks) = lines.next("equation row")?;
                    if toks[0] != "E" {
                        return Err(ParseError::new(line, "equation rows start with `E`"));
                    }
                    expect_len(line, toks.len() - 1, dim.saturating_add(1), "equation row")?;
                    let c = rational(line, toks[1])?;
                    eqs.push(LinearEquation::new(rationals(line, &toks[2..])?, c));
                }
                hrep = Some(HRep { dim, inequalities: ineqs, equations: eqs });
            }
            "VREP" if vrep.is_none() => {
                expect_keyword(line, &toks, "VREP", 1)?;
                let n = count(line, toks[1])?;
                let mut pts = Vec::new();
                if dim == 0 && n > 0 {
                    pts.push(Vec::new());
                }
                for _ in 0..if dim == 0 { 0 } else { n } {
                    let (line, toks) = lines.next("vertex")?;
                    expect_len(line, toks.len(), dim, "vertex")?;
                    pts.push(rationals(line, &toks)?);
                }
                vrep = Some(VRep::new(dim, pts).map_err(|e| ParseError::new(line, e.to_string()))?);
            }
            "END" => {
                expect_keyword(line, &toks, "END", 0)?;
                break;
            }
            other => return Err(ParseError::new(line, format!("unexpected `{other}`"))),
        }
    }
    lines.finish()?;
    if hrep.is_none() && vrep.is_none() {
        return Err(ParseError::new(lines.last_line, "polytope has neither HREP nor VREP section"));
    }
    Ok(PolytopeFile { name, dim, hrep, vrep })
}

pub fn write_polytope(name: &str, dim: usize, hrep: Option<&HRep>, vrep: Option<&VRep>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "POLY {name}");
    let _ = writeln!(s, "DIM {dim}");
    if let Some(h) = hrep {
        let _ = writeln!(s, "HREP {} {}", h.inequalities.len(), h.equations.len());
        for r in &h.inequalities {
            let _ = writeln!(s, "{}", trim_row(&r.b, &r.a));
        }
        for e in &h.equations {
            let _ = writeln!(s, "E {}", trim_row(&e.c, &e.a));
        }
    }
    if let Some(v) = vrep {
        let _ = writeln!(s, "VREP {}", v.len());
        for p in v.vertices.iter().filter(|p| !p.is_empty()) {
            let _ = writeln!(s, "{}", join(p));
        }
    }
    s.push_str("END\n");
    s
}

fn trim_row(head: &Rational, rest: &[Rational]) -> String {
    if rest.is_empty() {
        head.to_string()
    } else {
        format!("{head} {}", join(rest))
    }
}

/// Writes every representation the polytope currently holds.
pub fn write_polytope_of(name: &str, p: &Polytope) -> String {
    write_polytope(name, p.dim(), p.hrep(), p.vrep())
}

pub fn parse_graph(text: &str) -> Parsed<Graph> {
    let mut lines = Lines::new(text, '#');
    let (line, toks) = lines.next("GRAPH")?;
    expect_keyword(line, &toks, "GRAPH", 2)?;
    let n = count(line, toks[1])?;
    let m = count(line, toks[2])?;
    let mut edges = Vec::new();
    for _ in 0..m {
        let (line, toks) = lines.next("edge")?;
        expect_len(line, toks.len(), 2, "edge")?;
        edges.push((count(line, toks[0])?, count(line, toks[1])?));
    }
    lines.finish()?;
    Graph::new(n, edges).map_err(|e| ParseError::new(line, e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("GRAPH {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Reads DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then zero-terminated clauses that may span lines. A `%` line
/// ends the clause list.
pub fn parse_dimacs(text: &str) -> Parsed<CnfFormula> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            let toks: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() {
                return Err(ParseError::new(line, "duplicate problem line"));
            }
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(ParseError::new(line, "expected `p cnf <vars> <clauses>`"));
            }
            let vars = count(line, toks[2])?;
            if vars > i32::MAX as usize {
                return Err(ParseError::new(line, "too many variables"));
            }
            header = Some((line, vars, count(line, toks[3])?));
            continue;
        }
        if header.is_none() {
            return Err(ParseError::new(line, "clause before the problem line"));
        }
        for tok in t.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| ParseError::new(line, format!("invalid literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((hline, vars, nclauses)) = header else {
        return Err(ParseError::new(last, "missing `p cnf` line"));
    };
    if !current.is_empty() {
        return Err(ParseError::new(last, "last clause is not terminated by 0"));
    }
    if clauses.len() != nclauses {
        return Err(ParseError::new(
            hline,
            format!("header declares {nclauses} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(vars, clauses).map_err(|e| ParseError::new(hline, e.to_string()))
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.num_vars(), f.clauses().len());
    for c in f.clauses() {
        for l in c {
            let _ = write!(s, "{l} ");
        }
        s.push_str("0\n");
    }
    s
}

/// `EF <name>` / `DIM <d> <r> <rows>` / rows `g | E row | F row` / `END`.
pub fn parse_ef(text: &str) -> Parsed<ExtendedFormulation> {
    let mut lines = Lines::new(text, '#');
    let (line, toks) = lines.next("EF")?;
    if toks[0] != "EF" || toks.len() > 2 {
        return Err(ParseError::new(line, "expected `EF <name>`"));
    }
    let name = toks.get(1).copied().unwrap_or("").to_string();
    let (dline, toks) = lines.next("DIM")?;
    expect_keyword(dline, &toks, "DIM", 3)?;
    let d = count(dline, toks[1])?;
    let r = count(dline, toks[2])?;
    let rows = count(dline, toks[3])?;
    let mut e: Matrix = Vec::new();
    let mut f: Matrix = Vec::new();
    let mut g: Vector = Vec::new();
    for _ in 0..rows {
        let (line, toks) = lines.next("EF row")?;
        let parts: Vec<&[&str]> = toks.split(|t| *t == "|").collect();
        if parts.len() != 3 {
            return Err(ParseError::new(line, "EF row must have the form `g | E row | F row`"));
        }
        expect_len(line, parts[0].len(), 1, "right-hand side")?;
        expect_len(line, parts[1].len(), d, "E row")?;
        expect_len(line, parts[2].len(), r, "F row")?;
        g.push(rational(line, parts[0][0])?);
        e.push(rationals(line, parts[1])?);
        f.push(rationals(line, parts[2])?);
    }
    let (line, toks) = lines.next("END")?;
    expect_keyword(line, &toks, "END", 0)?;
    lines.finish()?;
    ExtendedFormulation::new(name, d, r, e, f, g).map_err(|err| ParseError::new(dline, err.to_string()))
}

pub fn write_ef(ef: &ExtendedFormulation) -> String {
    let mut s = format!("EF {}\nDIM {} {} {}\n", ef.name, ef.d(), ef.r(), ef.rows());
    for i in 0..ef.rows() {
        let mut row = ef.g()[i].to_string();
        row.push_str(" |");
        for x in &ef.e_mat()[i] {
            let _ = write!(row, " {x}");
        }
        row.push_str(" |");
        for x in &ef.f_mat()[i] {
            let _ = write!(row, " {x}");
        }
        let _ = writeln!(s, "{row}");
    }
    s.push_str("END\n");
    s
}

/// `MAP <s> <t>` / one line `<target> -> <origin>` per target variable,
/// where the origin is `v`, `-v` or `0` / `PROJECT p1 .. ps` / `END`.
pub fn parse_map(text: &str) -> Parsed<ReductionMap> {
    let mut lines = Lines::new(text, '#');
    let (hline, toks) = lines.next("MAP")?;
    expect_keyword(hline, &toks, "MAP", 2)?;
    let s = count(hline, toks[1])?;
    let t = count(hline, toks[2])?;
    let mut origins: BTreeMap<usize, Origin> = BTreeMap::new();
    while lines.peek_keyword().is_some_and(|k| k != "PROJECT") {
        let (line, toks) = lines.next("map line")?;
        if toks.len() != 3 || toks[1] != "->" {
            return Err(ParseError::new(line, "expected `<target> -> <source>`"));
        }
        let idx = count(line, toks[0])?;
        if idx == 0 || idx > t {
            return Err(ParseError::new(line, format!("target {idx} outside 1..={t}")));
        }
        let origin = match toks[2].strip_prefix('-') {
            Some(v) => Origin::NegatedCopy(count(line, v)?),
            None => match count(line, toks[2])? {
                0 => Origin::Padding,
                v => Origin::Copy(v),
            },
        };
        if origins.insert(idx, origin).is_some() {
            return Err(ParseError::new(line, format!("target {idx} listed twice")));
        }
    }
    let (line, toks) = lines.next("PROJECT")?;
    if toks[0] != "PROJECT" {
        return Err(ParseError::new(line, "expected `PROJECT`"));
    }
    let projection = toks[1..].iter().map(|x| count(line, x)).collect::<Parsed<Vec<_>>>()?;
    let (eline, toks) = lines.next("END")?;
    expect_keyword(eline, &toks, "END", 0)?;
    lines.finish()?;
    if origins.len() != t {
        return Err(ParseError::new(hline, format!("expected one line for each of the {t} targets")));
    }
    let map = ReductionMap {
        source_vars: s,
        target_vars: t,
        projection,
        origins: origins.into_values().collect(),
    };
    map.check().map_err(|e| ParseError::new(hline, e.to_string()))?;
    Ok(map)
}

pub fn write_map(map: &ReductionMap) -> String {
    let mut s = format!("MAP {} {}\n", map.source_vars, map.target_vars);
    for (i, o) in map.origins.iter().enumerate() {
        let _ = writeln!(s, "{} -> {o}", i + 1);
    }
    let _ = writeln!(s, "PROJECT {}", join(&map.projection));
    s.push_str("END\n");
    s
}

/// Whitespace-separated rationals across any number of lines.
pub fn parse_objective(text: &str) -> Parsed<Vector> {
    let lines = Lines::new(text, '#');
    let mut out = Vec::new();
    for (line, toks) in &lines.items {
        out.extend(rationals(*line, toks)?);
    }
    Ok(out)
}

pub fn write_objective(c: &[Rational]) -> String {
    format!("{}\n", join(c))
}

fn parse_rows<T>(text: &str, cell: impl Fn(usize, &str) -> Parsed<T>) -> Parsed<Vec<Vec<T>>> {
    let lines = Lines::new(text, '#');
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (line, toks) in &lines.items {
        let row = toks.iter().map(|t| cell(*line, t)).collect::<Parsed<Vec<T>>>()?;
        if let Some(first) = rows.first() {
            expect_len(*line, row.len(), first.len(), "grid row")?;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a slack matrix grid; entries must be nonnegative.
pub fn parse_slack_grid(text: &str) -> Parsed<Matrix> {
    parse_rows(text, |line, tok| {
        let x = rational(line, tok)?;
        if x.is_negative() {
            return Err(ParseError::new(line, format!("negative slack `{tok}`")));
        }
        Ok(x)
    })
}

pub fn parse_support_grid(text: &str) -> Parsed<Vec<Vec<bool>>> {
    parse_rows(text, |line, tok| match tok {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(ParseError::new(line, format!("support entries are 0 or 1, found `{tok}`"))),
    })
}
