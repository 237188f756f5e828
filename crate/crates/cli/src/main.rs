use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::Failure;

/// Exact polyhedral experiments: combinatorial polytopes, H-free facet
/// elimination, extended formulations and reductions.
#[derive(Parser, Debug)]
#[command(name = "hfree", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Enumeration cap applied to subset, tour and assignment generators.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,
    /// Node budget for the exact rectangle cover search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
    /// Seed for random point batteries.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel redundancy checks.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a combinatorial polytope as a vertex list.
    Zoo(ZooArgs),
    /// Split the facets of a polytope into those implied by a family and the rest.
    Qh(QhArgs),
    /// Separate points over a polytope using the family oracle and the residual facets.
    Separate(SeparateArgs),
    /// Optimize a linear objective by cutting planes.
    Optimize(OptimizeArgs),
    /// Rectangle-cover lower bound and trivial upper bound on extension complexity.
    Xcbounds(XcArgs),
    /// Extended formulation constructions.
    #[command(subcommand)]
    Ef(EfCommand),
    /// Rewrite a 3-CNF so every variable occurs at most twice positively and once negatively.
    Reduce(ReduceArgs),
    /// Encode the stable sets of a graph as a 2-CNF.
    #[command(name = "2sat")]
    TwoSat(TwoSatArgs),
    /// Check that a reduction map projects sat(psi) onto sat(phi).
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZooKind {
    Matching,
    PerfectMatching,
    InducedMatching,
    MaximalMatching,
    Tours,
    StableSets,
    Sat,
    Forests,
    Mpm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    All,
    Perfect,
    Induced,
    Maximal,
}

#[derive(Args, Debug)]
pub struct ZooArgs {
    pub kind: ZooKind,
    /// Vertex count for tours and forests.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub cnf: Option<PathBuf>,
    /// Matching variant for `matching`.
    #[arg(long, value_enum, default_value_t = Variant::All)]
    pub variant: Variant,
    /// Lower bound on the size of the second matching for `mpm`.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Require the second matching of `mpm` to have exactly `k` edges.
    #[arg(long)]
    pub exact: bool,
    /// Name written into the polytope file.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    OddSet,
    Subtour,
    OddCutPm,
    Box,
    Facets,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// Graph the family is derived from; defaults to the complete graph
    /// matching the dimension.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct QhArgs {
    pub polytope: PathBuf,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Include a redundancy certificate for every removed facet.
    #[arg(long)]
    pub certificates: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SeparateArgs {
    pub polytope: PathBuf,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// File holding the point to separate.
    #[arg(long, conflicts_with = "random")]
    pub point: Option<PathBuf>,
    /// Separate this many seeded random points of the affine hull instead.
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    pub polytope: PathBuf,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub objective: PathBuf,
    #[arg(long)]
    pub minimize: bool,
    /// Compare against the best generated vertex.
    #[arg(long)]
    pub check_brute_force: bool,
}

#[derive(Args, Debug)]
pub struct XcArgs {
    pub polytope: PathBuf,
    /// Also write the minimal slack matrix grid to this file.
    #[arg(long)]
    pub slack: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum EfCommand {
    /// Balas lift of the convex hull of a union.
    Balas { first: PathBuf, second: PathBuf },
    /// Intersection by stacking both systems.
    Intersect { first: PathBuf, second: PathBuf },
    /// Intersection through the polars of both polytopes.
    PolarIntersect { first: PathBuf, second: PathBuf },
    /// Arborescence-flow formulation of the forest polytope of K_n.
    Martin {
        #[arg(long)]
        n: usize,
    },
    /// Project a formulation to a polytope file.
    Project { formulation: PathBuf },
    /// Compare the projection of a formulation with a polytope.
    Validate { formulation: PathBuf, polytope: PathBuf },
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub cnf: PathBuf,
    /// Where to write the reduction map.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Pad two-literal clauses to width three by duplication. This gives an
    /// exact 3-CNF but padding variables then break the occurrence cap.
    #[arg(long)]
    pub pad: bool,
}

#[derive(Args, Debug)]
pub struct TwoSatArgs {
    pub graph: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub phi: PathBuf,
    pub psi: PathBuf,
    pub map: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.common.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global();
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hfree: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

impl Failure {
    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(path, e) => format!("{}: {e}", path.display()),
            Failure::Parse(path, e) => format!("{}: {e}", path.display()),
            Failure::Usage(m) | Failure::Verification(m) => m.clone(),
        }
    }
}
