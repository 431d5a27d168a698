//! `ckern`: load fixtures, run the verification suites, and emit
//! human-readable reports, JSON audit trails and DOT Hasse diagrams.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check
//! fails, 2 on usage or input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ckern_core::complementarity::{self, JointlyEpic, UnbiasedScope};
use ckern_core::copyability::{self, Structure};
use ckern_core::fdhilb::{ClassicalStructure, OrthonormalBasis, Projection};
use ckern_core::finrel::{AbelianGroupoid, Relation, Subset};
use ckern_core::lattice::{KSubElement, KSubLattice};
use ckern_core::vnalg;
use ckern_core::{Backend, Matrix, Tolerance, DEFAULT_EPS};

#[derive(Parser)]
#[command(name = "ckern", version, about = "Verify classical structures, copyable kernels and complementarity at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Scalar backend; defaults to whatever the input files use.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    /// Absolute tolerance for approximate comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS)]
    eps: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Approx,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the classical-structure axioms of a basis or copying map.
    VerifyCs {
        /// Orthonormal basis JSON; the structure is built from it.
        #[arg(long, conflicts_with = "delta")]
        basis: Option<PathBuf>,
        /// Classical structure JSON (copying map, optional basis).
        #[arg(long, required_unless_present = "basis")]
        delta: Option<PathBuf>,
    },
    /// Materialize and audit the lattice of copyable kernels.
    Copyables {
        /// Classical structure JSON with basis provenance.
        #[arg(long)]
        delta: PathBuf,
        /// Projection JSON expected to be refuted as non-copyable.
        #[arg(long)]
        probe: Vec<PathBuf>,
        /// Write the Hasse diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the lattice dump as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Close a family of projections into a lattice and audit it.
    Lattice {
        /// JSON array of projection matrices.
        #[arg(long)]
        projections: PathBuf,
        /// Abort closure beyond this many elements.
        #[arg(long, default_value_t = ckern_core::lattice::DEFAULT_MAX_LATTICE)]
        max_lattice: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Assert partial complementarity of two structures.
    Complement {
        #[arg(long)]
        delta1: PathBuf,
        #[arg(long)]
        delta2: PathBuf,
        #[arg(long, default_value = "atoms")]
        unbiased_scope: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Assert pairwise mutual unbiasedness of a family of structures.
    Mub {
        /// Classical structure JSON; repeat for each family member.
        #[arg(long, required = true, num_args = 1..)]
        delta: Vec<PathBuf>,
        #[arg(long, default_value = "atoms")]
        unbiased_scope: String,
        /// Also assert complete complementarity under this reading of
        /// "jointly epic". No default on purpose.
        #[arg(long)]
        jointly_epic: Option<String>,
    },
    /// Audit the induced commutative subalgebras of two structures.
    Subalg {
        #[arg(long)]
        delta1: PathBuf,
        #[arg(long)]
        delta2: PathBuf,
    },
    /// Verify a groupoid-induced structure in the relational model.
    Rel {
        /// Abelian groupoid JSON (Cayley table with -1 for undefined).
        #[arg(long)]
        groupoid: PathBuf,
        /// Partial equivalence relation JSON to test for copyability.
        #[arg(long)]
        per: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the full built-in acceptance battery.
    Suite,
}

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn new() -> Self {
        Report { lines: Vec::new() }
    }

    fn check(&mut self, anchor: &str, pass: bool, detail: impl AsRef<str>) {
        let tag = if pass { "[PASS]" } else { "[FAIL]" };
        self.lines.push((pass, format!("{tag} {anchor} {}", detail.as_ref())));
    }

    fn finish(self) -> ExitCode {
        let mut all = true;
        for (pass, line) in &self.lines {
            println!("{line}");
            all &= pass;
        }
        if all {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// Applies the --backend request: approximate inputs cannot be lifted
/// to exact, exact inputs convert down on demand.
fn adapt_structure(cs: ClassicalStructure, common: &Common) -> Result<ClassicalStructure> {
    match (common.backend, cs.backend()) {
        (Some(BackendArg::Exact), Backend::Approx) => {
            Err(anyhow!("input is approximate; cannot convert to the exact backend"))
        }
        (Some(BackendArg::Approx), Backend::Exact) => Ok(cs.to_approx()),
        _ => Ok(cs),
    }
}

fn tolerance_for(cs: &ClassicalStructure, common: &Common) -> Tolerance {
    match cs.backend() {
        Backend::Exact => Tolerance::exact(),
        Backend::Approx => Tolerance::approx(common.eps),
    }
}

fn load_structure(path: &Path, common: &Common) -> Result<ClassicalStructure> {
    adapt_structure(read_json::<ClassicalStructure>(path)?, common)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = cli.common.clone();
    match cli.command {
        Command::VerifyCs { basis, delta } => {
            let cs = match (basis, delta) {
                (Some(b), _) => {
                    let basis: OrthonormalBasis = read_json(&b)?;
                    adapt_structure(ClassicalStructure::from_basis(&basis)?, &common)?
                }
                (None, Some(d)) => load_structure(&d, &common)?,
                (None, None) => unreachable!("clap enforces one input"),
            };
            let tol = tolerance_for(&cs, &common);
            let r = cs.verify(&tol)?;
            let mut report = Report::new();
            report.check("cs-dagger-monic", r.dagger_monic, "delta is an isometry");
            report.check("cs-commutative", r.commutative, "swap after delta is delta");
            report.check("cs-associative", r.associative, "both regroupings agree");
            report.check("cs-involution", r.hstar, "involution law has a solution");
            Ok(report.finish())
        }
        Command::Copyables { delta, probe, dot, json } => {
            let cs = load_structure(&delta, &common)?;
            let tol = tolerance_for(&cs, &common);
            let probes = probe
                .iter()
                .map(|p| {
                    let m: Matrix = read_json(p)?;
                    Ok(KSubElement::Hilb(Projection::new(m, &tol)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let d = Structure::Hilb(cs);
            let (lat, cert) = copyability::copyable_lattice(&d, &probes, &tol)?;
            let mut report = Report::new();
            report.check(
                "copyable-lattice",
                true,
                format!(
                    "{} kernels certified copyable, {} atoms",
                    cert.certified_members,
                    lat.atoms().len()
                ),
            );
            let (boolean, _) = lat.is_boolean()?;
            report.check("copyable-lattice-boolean", boolean, "meets-zero pairs compose to zero");
            report.check(
                "copyable-lattice-orthomodular",
                lat.orthomodular_check().0,
                "relative complements rejoin",
            );
            report.check(
                "probes-refuted",
                cert.probe_anomalies.is_empty(),
                format!("{} probes refuted", cert.refuted_probes),
            );
            if let Some(path) = dot {
                write_output(&path, &lat.hasse())?;
            }
            if let Some(path) = json {
                write_output(&path, &serde_json::to_string_pretty(&lat)?)?;
            }
            Ok(report.finish())
        }
        Command::Lattice { projections, max_lattice, dot, json } => {
            let mats: Vec<Matrix> = read_json(&projections)?;
            if mats.is_empty() {
                return Err(anyhow!("projection list is empty"));
            }
            let tol = match mats[0].backend() {
                Backend::Exact => Tolerance::exact(),
                Backend::Approx => Tolerance::approx(common.eps),
            };
            let gens = mats
                .into_iter()
                .map(|m| Ok(KSubElement::Hilb(Projection::new(m, &tol)?)))
                .collect::<Result<Vec<_>>>()?;
            let lat = KSubLattice::closure(&gens, &tol, max_lattice)?;
            let mut report = Report::new();
            let (boolean, _) = lat.is_boolean()?;
            report.check(
                "lattice-closure",
                true,
                format!("{} elements, boolean={boolean}", lat.len()),
            );
            report.check(
                "lattice-orthomodular",
                lat.orthomodular_check().0,
                "relative complements rejoin",
            );
            if let Some(path) = dot {
                write_output(&path, &lat.hasse())?;
            }
            if let Some(path) = json {
                write_output(&path, &serde_json::to_string_pretty(&lat)?)?;
            }
            Ok(report.finish())
        }
        Command::Complement { delta1, delta2, unbiased_scope, json } => {
            let d1 = Structure::Hilb(load_structure(&delta1, &common)?);
            let d2 = Structure::Hilb(load_structure(&delta2, &common)?);
            let scope: UnbiasedScope = unbiased_scope.parse().map_err(|e: String| anyhow!(e))?;
            let tol = structure_tolerance(&d1, &common);
            let pc = complementarity::partially_complementary(&d1, &d2, &tol)?;
            let audit = complementarity::mu_implies_pc_audit(&d1, &d2, scope, &tol)?;
            let mut report = Report::new();
            report.check(
                "partial-complementarity",
                pc.partially_complementary,
                if pc.witnesses.is_empty() {
                    "only trivial kernels are copyable along both".to_string()
                } else {
                    format!("shared copyable kernels: {}", pc.witnesses.join(", "))
                },
            );
            report.check(
                "mutual-unbiasedness",
                audit.mutually_unbiased,
                format!("scope {unbiased_scope}"),
            );
            report.check(
                "mu-implies-pc",
                !audit.implication_violated,
                "no counterexample to the implication",
            );
            if let Some(path) = json {
                write_output(&path, &serde_json::to_string_pretty(&pc)?)?;
            }
            Ok(report.finish())
        }
        Command::Mub { delta, unbiased_scope, jointly_epic } => {
            let scope: UnbiasedScope = unbiased_scope.parse().map_err(|e: String| anyhow!(e))?;
            let ds = delta
                .iter()
                .map(|p| Ok(Structure::Hilb(load_structure(p, &common)?)))
                .collect::<Result<Vec<_>>>()?;
            let tol = structure_tolerance(&ds[0], &common);
            let mut report = Report::new();
            for i in 0..ds.len() {
                for j in (i + 1)..ds.len() {
                    let mu = complementarity::mutually_unbiased(&ds[i], &ds[j], scope, &tol)?;
                    let pc = complementarity::partially_complementary(&ds[i], &ds[j], &tol)?
                        .partially_complementary;
                    report.check(
                        "pair-mutually-unbiased",
                        mu,
                        format!("members {i} and {j}"),
                    );
                    report.check(
                        "pair-partially-complementary",
                        pc,
                        format!("members {i} and {j}"),
                    );
                }
            }
            if let Some(reading) = jointly_epic {
                let interp: JointlyEpic = reading.parse().map_err(|e: String| anyhow!(e))?;
                let r = complementarity::completely_complementary(&ds, interp, &tol)?;
                report.check(
                    "completely-complementary",
                    r.completely_complementary,
                    format!("jointly epic ({reading}): {}", r.jointly_epic),
                );
            }
            Ok(report.finish())
        }
        Command::Subalg { delta1, delta2 } => {
            let d1 = Structure::Hilb(load_structure(&delta1, &common)?);
            let d2 = Structure::Hilb(load_structure(&delta2, &common)?);
            let tol = structure_tolerance(&d1, &common);
            let mut report = Report::new();
            for (label, d) in [("first", &d1), ("second", &d2)] {
                let alg = vnalg::induced_algebra(d, &tol)?;
                report.check(
                    "subalg-commutative",
                    alg.is_commutative(&tol)?,
                    format!("{label} structure, span dimension {}", alg.span_dim()),
                );
                report.check(
                    "subalg-round-trip",
                    vnalg::round_trip_algebra(&alg, &tol)?,
                    format!("{label} structure"),
                );
                let cc = vnalg::commutant(&vnalg::commutant(&alg, &tol)?, &tol)?;
                report.check(
                    "subalg-double-commutant",
                    cc.equals(&alg, &tol)?,
                    format!("{label} structure"),
                );
            }
            let (pc_s, pc_a) = vnalg::bridge_check(&d1, &d2, &tol)?;
            report.check(
                "subalg-pc-bridge",
                pc_s == pc_a,
                format!("structure level {pc_s}, algebra level {pc_a}"),
            );
            Ok(report.finish())
        }
        Command::Rel { groupoid, per, json } => {
            let g: AbelianGroupoid = read_json(&groupoid)?;
            let mut report = Report::new();
            let (monic, comm, assoc) = g.verify_delta()?;
            report.check("rel-delta-dagger-monic", monic, "converse after copy is identity");
            report.check("rel-delta-commutative", comm, "swap after copy is copy");
            report.check("rel-delta-associative", assoc, "both regroupings agree");
            let copyables = g.copyable_subsets();
            report.check(
                "rel-copyable-subsets",
                true,
                format!(
                    "{} of {} subsets copyable: {}",
                    copyables.len(),
                    1u64 << g.carrier(),
                    copyables
                        .iter()
                        .map(describe_subset)
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
            );
            if let Some(path) = per {
                let q: Relation = read_json(&path)?;
                let congruence = g.per_copyable(&q)?;
                let direct = g.per_copyable_via_delta(&q)?;
                report.check(
                    "rel-per-routes-agree",
                    congruence == direct,
                    format!("congruence {congruence}, copy equation {direct}"),
                );
            }
            if let Some(path) = json {
                let masks: Vec<Vec<usize>> = copyables.iter().map(|s| s.elements()).collect();
                write_output(&path, &serde_json::to_string_pretty(&masks)?)?;
            }
            Ok(report.finish())
        }
        Command::Suite => {
            let mut all = true;
            for outcome in ckern_core::suite::run_all() {
                println!("{}", outcome.line());
                all &= outcome.passed();
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn structure_tolerance(d: &Structure, common: &Common) -> Tolerance {
    match d {
        Structure::Hilb(cs) => tolerance_for(cs, common),
        Structure::Rel(_) => Tolerance::exact(),
    }
}

fn describe_subset(s: &Subset) -> String {
    let mut out = String::from("{");
    for (i, e) in s.elements().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{e}");
    }
    out.push('}');
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
