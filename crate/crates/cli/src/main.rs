use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nefcone::classes::minus_n_classes;
use nefcone::corpus;
use nefcone::files::{ActionFile, SurfaceFile};
use nefcone::pairs::{self, GroupAction};
use nefcone::rootsys::ambient_root_type;
use nefcone::{
    ordinary_alpha, weyl_order, AlphaOptions, DivisorClass, Error, PicardLattice, Rat, SimpleSystem, SurfaceKind,
    SurfaceSpec,
};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "nefcone", version, about = "Exact nef cone volumes of Del Pezzo surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute α for a surface file, optionally with a group action file.
    Alpha {
        surface: PathBuf,
        #[arg(long)]
        action: Option<PathBuf>,
        /// Compute degree 1 from its own nef cone (slow) instead of the face sum.
        #[arg(long)]
        degree_1_direct: bool,
    },
    /// Print one of the reference tables.
    Tables {
        which: Table,
        /// CSV output (the default).
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check an identity over the built-in corpus.
    Verify {
        which: Suite,
        /// Random surfaces per degree.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// List the (−1)- or (−2)-classes of a blow-up of P².
    Classes {
        #[arg(long)]
        degree: u8,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..=2))]
        n: i64,
        #[arg(long)]
        json: bool,
    },
    /// List conjugacy classes of subgroups of the Weyl group.
    Subgroups {
        #[arg(long, value_parser = clap::value_parser!(u8).range(5..=7))]
        degree: u8,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Ordinary,
    RootSystems,
    Pairs5,
    Pairs6,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Inductive,
    Weyl,
    PairWeyl,
    All,
}

/// How a command failed; decides the exit code.
enum Failure {
    Input(serde_json::Value),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPointed { .. } | Error::RayNotMet(_) | Error::DegenerateForm => Failure::Internal(e.to_string()),
            Error::InvalidSurface(violations) => {
                Failure::Input(json!({ "error": "invalid surface", "violations": violations }))
            }
            other => Failure::Input(json!({ "error": other.to_string(), "violations": [other.to_string()] })),
        }
    }
}

type CmdResult = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(cli.command)));
    match outcome {
        Ok(Ok(out)) => {
            let mut stdout = io::stdout().lock();
            // A closed pipe is not worth reporting.
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Err(Failure::Input(report))) => {
            println!("{report}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(msg))) => {
            println!("{}", json!({ "error": msg, "internal": true }));
            ExitCode::from(2)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            println!("{}", json!({ "error": msg, "internal": true }));
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Alpha {
            surface,
            action,
            degree_1_direct,
        } => cmd_alpha(&surface, action.as_deref(), degree_1_direct),
        Command::Tables { which, json, .. } => cmd_tables(which, json),
        Command::Verify {
            which,
            samples,
            seed,
            json,
        } => cmd_verify(which, samples, seed, json),
        Command::Classes { degree, n, json } => cmd_classes(degree, n, json),
        Command::Subgroups { degree, json } => cmd_subgroups(degree, json),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        Failure::Input(json!({ "error": msg, "violations": [msg] }))
    })
}

#[derive(Serialize)]
struct AlphaReport {
    alpha: String,
    rho: usize,
    root_type: String,
    orbit_root_type: String,
    weyl_order: u64,
    effective_generators: usize,
    nef_rays: Option<usize>,
}

fn cmd_alpha(surface: &Path, action: Option<&Path>, degree_one_direct: bool) -> CmdResult {
    let spec = SurfaceFile::parse(&read(surface)?)?.to_spec()?;
    let validation = spec.validate();
    if !validation.is_ok() {
        return Err(Error::InvalidSurface(validation.violations).into());
    }
    for w in &validation.warnings {
        eprintln!("warning: {w}");
    }
    let root_type = spec.root_type()?;
    let report = match action {
        None => {
            let res = spec.alpha_with(AlphaOptions { degree_one_direct })?;
            AlphaReport {
                alpha: res.alpha.to_string(),
                rho: res.rho,
                root_type: root_type.to_string(),
                orbit_root_type: root_type.to_string(),
                weyl_order: weyl_order(&root_type),
                effective_generators: res.num_effective_generators,
                nef_rays: res.num_nef_rays,
            }
        }
        Some(path) => {
            let h = ActionFile::parse(&read(path)?)?.to_action()?;
            if h.lattice() != spec.lattice() {
                return Err(Error::KindMismatch {
                    kind: h.lattice().kind().selector().name().to_string(),
                    degree: spec.degree().into(),
                }
                .into());
            }
            let res = pairs::alpha_pair(&spec, &h)?;
            let orbit = pairs::orbit_root_type(&spec, &h)?;
            AlphaReport {
                alpha: res.alpha.to_string(),
                rho: res.rho,
                root_type: root_type.to_string(),
                orbit_root_type: orbit.to_string(),
                weyl_order: weyl_order(&orbit),
                effective_generators: res.num_effective_generators,
                nef_rays: res.num_nef_rays,
            }
        }
    };
    Ok(format!("{}\n", serde_json::to_string(&report).expect("plain data")))
}

#[derive(Serialize)]
struct OrdinaryRow {
    d: u8,
    #[serde(rename = "N")]
    n: usize,
    alpha: String,
}

#[derive(Serialize)]
struct RootSystemRow {
    d: u8,
    #[serde(rename = "R")]
    root_type: String,
    roots: usize,
    weyl_order: u64,
}

#[derive(Serialize)]
struct PairTableRow {
    #[serde(rename = "H")]
    label: String,
    order: usize,
    orbits: String,
    rho: usize,
    m: usize,
    alpha: String,
}

fn render<T: Serialize>(rows: &[T], json: bool) -> CmdResult {
    if json {
        return Ok(format!("{}\n", serde_json::to_string_pretty(rows).expect("plain data")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn cmd_tables(which: Table, json: bool) -> CmdResult {
    match which {
        Table::Ordinary => {
            let mut rows = Vec::new();
            for d in (1..=8u8).rev() {
                let kind = if d == 8 {
                    SurfaceKind::OneBlowup
                } else {
                    SurfaceKind::Blowup(d)
                };
                let lat = PicardLattice::of_kind(kind);
                let alpha = if d == 8 {
                    SurfaceSpec::ordinary(kind).alpha()?.alpha
                } else {
                    ordinary_alpha(d)?
                };
                rows.push(OrdinaryRow {
                    d,
                    n: minus_n_classes(&lat, 1).len(),
                    alpha: alpha.to_string(),
                });
            }
            render(&rows, json)
        }
        Table::RootSystems => {
            let mut rows = Vec::new();
            for d in (1..=7u8).rev() {
                let lat = PicardLattice::of_kind(SurfaceKind::Blowup(d));
                let root_type = SimpleSystem::new(&lat, pairs::ambient_simple_roots(&lat)?).classify()?;
                if root_type != ambient_root_type(d) {
                    return Err(Failure::Internal(format!("degree {d}: simple roots span {root_type}")));
                }
                rows.push(RootSystemRow {
                    d,
                    weyl_order: weyl_order(&root_type),
                    root_type: root_type.to_string(),
                    roots: minus_n_classes(&lat, 2).len(),
                });
            }
            render(&rows, json)
        }
        Table::Pairs5 | Table::Pairs6 => {
            let d = if matches!(which, Table::Pairs5) { 5 } else { 6 };
            let lat = PicardLattice::of_kind(SurfaceKind::Blowup(d));
            let rows: Vec<PairTableRow> = pairs::pair_table(d)?
                .into_iter()
                .map(|row| PairTableRow {
                    label: row.label,
                    order: row.order,
                    orbits: render_orbits(&lat, &row.orbits),
                    rho: row.rho,
                    m: row.m,
                    alpha: row.alpha.to_string(),
                })
                .collect();
            render(&rows, json)
        }
    }
}

/// Orbits as `{E1 L-E2-E3} {E2 E3}`, members and orbits in name order.
fn render_orbits(lat: &PicardLattice, orbits: &[Vec<DivisorClass>]) -> String {
    let mut named: Vec<Vec<String>> = orbits
        .iter()
        .map(|o| {
            let mut names: Vec<String> = o.iter().map(|c| lat.class_name(c)).collect();
            names.sort();
            names
        })
        .collect();
    named.sort();
    named
        .iter()
        .map(|o| format!("{{{}}}", o.join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct Mismatch {
    suite: &'static str,
    case: String,
    expected: String,
    got: String,
}

#[derive(Default, Serialize)]
struct SuiteReport {
    suite: &'static str,
    cases: usize,
    mismatches: Vec<Mismatch>,
}

fn describe(spec: &SurfaceSpec) -> String {
    let lat = spec.lattice();
    let curves: Vec<String> = spec.minus_two_curves().iter().map(|c| lat.class_name(c)).collect();
    format!("d={} [{}]", spec.degree(), curves.join(", "))
}

/// The ordinary surface and `samples` random surfaces in each degree 3..7.
fn surface_corpus(samples: usize, seed: u64) -> Vec<SurfaceSpec> {
    let mut out = Vec::new();
    for d in (3..=7u8).rev() {
        out.push(SurfaceSpec::ordinary(SurfaceKind::Blowup(d)));
        out.extend(corpus::random_surfaces(d, samples, seed));
    }
    out
}

fn verify_inductive(samples: usize, seed: u64) -> nefcone::Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: "inductive",
        ..Default::default()
    };
    for spec in surface_corpus(samples, seed) {
        let check = spec.check_inductive()?;
        report.cases += 1;
        if !check.equal {
            report.mismatches.push(Mismatch {
                suite: "inductive",
                case: describe(&spec),
                expected: check.lhs.to_string(),
                got: check.rhs.to_string(),
            });
        }
    }
    Ok(report)
}

fn verify_weyl(samples: usize, seed: u64) -> nefcone::Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: "weyl",
        ..Default::default()
    };
    let mut cases = surface_corpus(samples, seed);
    for d in 5..=7 {
        cases.extend(corpus::simple_systems(d));
    }
    for spec in cases {
        let direct = spec.alpha()?.alpha;
        let predicted = spec.alpha_via_weyl()?;
        report.cases += 1;
        if direct != predicted {
            report.mismatches.push(Mismatch {
                suite: "weyl",
                case: describe(&spec),
                expected: predicted.to_string(),
                got: direct.to_string(),
            });
        }
    }
    Ok(report)
}

fn verify_pair_weyl() -> nefcone::Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: "pair-weyl",
        ..Default::default()
    };
    for d in [6u8, 5] {
        for (spec, h) in corpus::stable_pairs(d)? {
            let direct: Rat = pairs::alpha_pair(&spec, &h)?.alpha;
            let predicted = pairs::alpha_pair_via_weyl(&spec, &h)?;
            report.cases += 1;
            if direct != predicted {
                report.mismatches.push(Mismatch {
                    suite: "pair-weyl",
                    case: format!("{} with |H|={}", describe(&spec), h.order()),
                    expected: predicted.to_string(),
                    got: direct.to_string(),
                });
            }
        }
    }
    Ok(report)
}

fn cmd_verify(which: Suite, samples: usize, seed: u64, json: bool) -> CmdResult {
    let mut reports = Vec::new();
    if matches!(which, Suite::Inductive | Suite::All) {
        reports.push(verify_inductive(samples, seed)?);
    }
    if matches!(which, Suite::Weyl | Suite::All) {
        reports.push(verify_weyl(samples, seed)?);
    }
    if matches!(which, Suite::PairWeyl | Suite::All) {
        reports.push(verify_pair_weyl()?);
    }
    let failed: usize = reports.iter().map(|r| r.mismatches.len()).sum();
    let out = if json {
        format!("{}\n", serde_json::to_string_pretty(&reports).expect("plain data"))
    } else {
        let mut s = String::new();
        for r in &reports {
            let verdict = if r.mismatches.is_empty() { "pass" } else { "FAIL" };
            s.push_str(&format!(
                "{}: {} cases, {} mismatches: {verdict}\n",
                r.suite,
                r.cases,
                r.mismatches.len()
            ));
            for m in &r.mismatches {
                s.push_str(&format!("  {}: expected {}, got {}\n", m.case, m.expected, m.got));
            }
        }
        s
    };
    if failed > 0 {
        print!("{out}");
        return Err(Failure::Internal(format!("{failed} mismatches")));
    }
    Ok(out)
}

fn cmd_classes(degree: u8, n: i64, json: bool) -> CmdResult {
    if !(1..=7).contains(&degree) {
        return Err(Error::NeedsBlowup.into());
    }
    let lat = PicardLattice::of_kind(SurfaceKind::Blowup(degree));
    let classes = minus_n_classes(&lat, n);
    if json {
        let items: Vec<_> = classes
            .iter()
            .map(|c| json!({ "name": lat.class_name(c), "coords": c.coords() }))
            .collect();
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&items).expect("plain data")
        ));
    }
    Ok(classes.iter().map(|c| lat.class_name(c) + "\n").collect())
}

fn cmd_subgroups(degree: u8, json: bool) -> CmdResult {
    let classes: Vec<(String, GroupAction)> = pairs::labelled_subgroup_classes(degree)?;
    if json {
        let items: Vec<_> = classes
            .iter()
            .map(|(label, h)| json!({ "label": label, "order": h.order(), "action": ActionFile::from_action(h) }))
            .collect();
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&items).expect("plain data")
        ));
    }
    Ok(classes
        .iter()
        .map(|(label, h)| format!("{}\t{label}\n", h.order()))
        .collect())
}
