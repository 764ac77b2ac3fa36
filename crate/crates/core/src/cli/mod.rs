//! The `tallone` command line.
//!
//! Exit status 0 means success or a positive verdict, 1 a negative verdict
//! and 2 an input error. JSON output has sorted keys and exact rationals.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactla::{Int, LatticeBasis, Rational};
use crate::model::{ComplexityOneModel, TruncationSpec};
use crate::painting::{compare_records, ClassificationRecord, Verdict};
use crate::polyhedra::{delzant_vertex_report, volume, HPolyhedron};
use crate::pwaffine::integrate;
use crate::serde_util::{format_rational, parse_rational};
use crate::skeleton::{betti, check_delta_compat, check_rho_compat_with, checkpoints, CompatReport, TruncationChoice};
use crate::toricproj::{build_projection, build_projection_relaxed, ComplexityOneBundle, ProjectionError};

/// Version of the JSON schemas read and written.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Read(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Parse(PathBuf, serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error("cannot write {0}: {1}")]
    Write(PathBuf, std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "tallone", version = SCHEMA_VERSION, about = "Classification data of tall complexity-one spaces")]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delzant test with per-vertex diagnostics.
    CheckPolytope { input: PathBuf },
    /// Validity, tallness, exponents, circle and moment cone of a model.
    AnalyzeModel { input: PathBuf },
    /// Duistermaat-Heckman function of a truncated model.
    TruncateDh {
        input: PathBuf,
        /// Complementary circle in g coordinates, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        j: Option<Vec<String>>,
        #[arg(long, default_value = "1")]
        kappa: String,
    },
    /// Complexity-one data of a Delzant polytope with the last circle dropped.
    Project {
        input: PathBuf,
        /// Human-readable summary instead of JSON.
        #[arg(long)]
        report: bool,
        /// Allow non-Delzant faces over the boundary of the image.
        #[arg(long)]
        relaxed: bool,
    },
    /// Compatibility of a skeleton with Δ and ρ.
    CheckCompat {
        input: PathBuf,
        /// Include the checkpoint set.
        #[arg(long)]
        checkpoints: bool,
        #[arg(long, default_value = "1")]
        kappa: String,
    },
    /// Compares two classification records.
    Compare { first: PathBuf, second: PathBuf },
}

/// Result of a command: exit status and the text to emit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Read(path.to_path_buf(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(path.to_path_buf(), e))
}

/// Pretty JSON with sorted keys.
pub fn canonical_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("serialisable");
    let mut s = serde_json::to_string_pretty(&value).expect("serialisable");
    s.push('\n');
    s
}

fn emit(code: i32, v: &Value) -> Outcome {
    Outcome {
        code,
        output: canonical_json(v),
    }
}

fn rational_arg(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(CliError::Schema)
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::CheckPolytope { input } => check_polytope(&read(input)?),
        Command::AnalyzeModel { input } => Ok(analyze_model(&read(input)?)),
        Command::TruncateDh { input, j, kappa } => {
            let m: ComplexityOneModel = read(input)?;
            let j = match j {
                Some(j) => j
                    .iter()
                    .map(|s| s.trim().parse::<Int>().map_err(|_| CliError::Schema(format!("invalid integer {s:?} in --j"))))
                    .collect::<Result<Vec<_>, _>>()?,
                None => m.complementary_circle().map_err(|e| CliError::Schema(e.to_string()))?,
            };
            let spec = TruncationSpec { j, kappa: rational_arg(kappa)? };
            let f = m.dh_truncation(&spec).map_err(|e| CliError::Schema(e.to_string()))?;
            Ok(Outcome {
                code: 0,
                output: canonical_json(&f),
            })
        }
        Command::Project { input, report, relaxed } => {
            let p: HPolyhedron = read(input)?;
            Ok(project(&p, *report, *relaxed))
        }
        Command::CheckCompat { input, checkpoints, kappa } => {
            let b: ComplexityOneBundle = read(input)?;
            check_compat(&b, *checkpoints, rational_arg(kappa)?)
        }
        Command::Compare { first, second } => {
            let a: ClassificationRecord = read(first)?;
            let b: ClassificationRecord = read(second)?;
            let c = compare_records(&a, &b);
            let code = if c.verdict == Verdict::IsomorphicData { 0 } else { 1 };
            Ok(emit(code, &serde_json::to_value(&c).expect("serialisable")))
        }
    }
}

fn check_polytope(p: &HPolyhedron) -> Result<Outcome, CliError> {
    let lattice = LatticeBasis::standard(p.dim());
    Ok(match delzant_vertex_report(p, &lattice) {
        Ok(r) => {
            let delzant = !r.is_empty() && r.iter().all(|v| v.delzant);
            emit(i32::from(!delzant), &json!({ "delzant": delzant, "vertices": r }))
        }
        Err(e) => emit(1, &json!({ "delzant": false, "reason": e.to_string() })),
    })
}

#[derive(Serialize)]
struct Ints(#[serde(with = "crate::serde_util::int_vec")] Vec<Int>);

fn ints(v: Vec<Int>) -> Value {
    serde_json::to_value(Ints(v)).expect("serialisable")
}

fn analyze_model(m: &ComplexityOneModel) -> Outcome {
    let validity = m.label().validity();
    let mut out = json!({ "validity": validity });
    if !validity.is_valid() {
        return emit(1, &out);
    }
    let tall = m.is_tall().unwrap_or(false);
    out["tall"] = json!(tall);
    out["center_exceptional"] = json!(m.is_center_exceptional().unwrap_or(false));
    if let Ok(c) = m.moment_cone() {
        out["moment_cone"] = serde_json::to_value(c).expect("serialisable");
    }
    if tall {
        if let Ok(g) = m.g_lattices() {
            out["xi"] = ints(m.defining_exponents().expect("tall models have exponents"));
            if let Ok(j) = g.complementary_circle() {
                out["j"] = ints(j);
            }
            out["g_lattices"] = serde_json::to_value(&g).expect("serialisable");
        }
    }
    emit(i32::from(!tall), &out)
}

fn project(p: &HPolyhedron, report: bool, relaxed: bool) -> Outcome {
    let lattice = LatticeBasis::standard(p.dim());
    let result = if relaxed {
        build_projection_relaxed(p, &lattice)
    } else {
        build_projection(p, &lattice)
    };
    let (code, bundle) = match result {
        Ok(b) => (0, b),
        Err(ProjectionError::NotTall(b)) => (1, *b),
        Err(e) => return emit(1, &json!({ "error": e.to_string() })),
    };
    if report {
        Outcome {
            code,
            output: project_report(p, &bundle),
        }
    } else {
        emit(code, &serde_json::to_value(&bundle).expect("serialisable"))
    }
}

fn point(x: &[Rational]) -> String {
    let s: Vec<String> = x.iter().map(format_rational).collect();
    format!("({})", s.join(", "))
}

fn project_report(p: &HPolyhedron, b: &ComplexityOneBundle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tall: {}", b.tall);
    let _ = writeln!(s, "genus: {}", b.genus);
    let _ = writeln!(s, "image:");
    for c in b.delta.ineqs() {
        let a: Vec<String> = c.a.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  [{}]·x ≥ {}", a.join(", "), c.b);
    }
    let _ = writeln!(s, "skeleton: {} cells", b.skeleton.cells.len());
    for (i, c) in b.skeleton.cells.iter().enumerate() {
        let v = c.carrier.to_v().map(|v| v.points).unwrap_or_default();
        let pts: Vec<String> = v.iter().map(|x| point(x)).collect();
        let w: Vec<String> = c.label.weights().iter().map(|w| format!("{w:?}")).collect();
        let _ = writeln!(s, "  cell {i}: conv{{{}}} weights {}", pts.join(", "), w.join(" "));
    }
    for e in &b.skeleton.excluded {
        let v = e.to_v().map(|v| v.points).unwrap_or_default();
        let pts: Vec<String> = v.iter().map(|x| point(x)).collect();
        let _ = writeln!(s, "  excluded: conv{{{}}}", pts.join(", "));
    }
    if let Ok(h) = betti(&b.skeleton) {
        let _ = writeln!(s, "betti: b0={} b1={} b2(mod 2)={}", h.b0, h.b1, h.b2_mod2);
    }
    let _ = writeln!(s, "rho: {} affine pieces", b.rho.cells().len());
    for c in b.rho.cells() {
        let _ = writeln!(s, "  {} + {}·x on {} constraints", c.constant, point(&c.slope), c.carrier.ineqs().len());
    }
    if let (Ok(i), Ok(v)) = (integrate(&b.rho), volume(p)) {
        let _ = writeln!(s, "integral of rho: {i} (polytope volume {v})");
    }
    s
}

fn summary(r: &CompatReport) -> Value {
    let failures: Vec<_> = r.failures().collect();
    json!({
        "passed": r.passed,
        "checked": r.checkpoints.len(),
        "failures": failures,
    })
}

fn check_compat(b: &ComplexityOneBundle, with_points: bool, kappa: Rational) -> Result<Outcome, CliError> {
    b.skeleton.validate().map_err(|e| CliError::Schema(format!("invalid skeleton: {e}")))?;
    let n = b.delta.dim();
    let lattice = LatticeBasis::standard(n);
    let schema = |e: crate::skeleton::SkeletonError| CliError::Schema(e.to_string());
    let d = check_delta_compat(&b.skeleton, &b.delta).map_err(schema)?;
    let choice = TruncationChoice { kappa, shift: Vec::new() };
    let r = check_rho_compat_with(&b.skeleton, &b.delta, &b.rho, &lattice, &choice).map_err(schema)?;
    let passed = d.passed && r.passed;
    let mut out = json!({ "passed": passed, "delta": summary(&d), "rho": summary(&r) });
    if with_points {
        let pts = checkpoints(&b.skeleton, &b.delta, Some(&b.rho)).map_err(schema)?;
        let pts: Vec<Vec<String>> = pts.iter().map(|p| p.iter().map(format_rational).collect()).collect();
        out["checkpoints"] = json!(pts);
    }
    Ok(emit(i32::from(!passed), &out))
}

fn set_threads() {
    if let Some(n) = std::env::var("TALLONE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Writes `text` to `path` via a temporary file, so that `path` is either
/// untouched or complete.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

/// Parses arguments, runs the command and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    set_threads();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = write_atomic(path, &outcome.output) {
                eprintln!("error: {}", CliError::Write(path.clone(), e));
                return 2;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.output.as_bytes());
        }
    }
    outcome.code
}
