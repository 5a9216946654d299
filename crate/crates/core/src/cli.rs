//! Command-line front end. `parse_and_dispatch` is the whole program minus
//! process exit, so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::formats::{parse_algebra, parse_cubic, parse_torsion, InputError, LoadedAlgebra};
use crate::legendrian::{
    ambient_space, cubic_nondegenerate, stabilizer_algebra, Ambient, CubicForm, LegendrianError,
    SamplerConfig, DEFAULT_SEED,
};
use crate::prolong::{prolongation_space, ProlongError};
use crate::splitting::build_context;
use crate::symplectic::{csp_basis, AlgebraReport, SymplecticSpace};
use crate::verifier::{
    consistency_audit, legendrian_checks, run_scenario, CubicDigest, LegendrianChecks,
    ScenarioConfig, ScenarioReport,
};

pub const SEED_ENV: &str = "LEGPRO_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "legpro",
    version,
    about = "Exact contact prolongations and Legendrian cubic varieties"
)]
pub struct Cli {
    /// Worker threads for parallel elimination (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Emit JSON. With a path, JSON goes to the file and a summary to stdout.
    #[arg(long, global = true, num_args = 0..=1, value_name = "PATH")]
    json: Option<Option<PathBuf>>,

    /// Sampling seed (overrides LEGPRO_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension (and basis) of csp(V) for dim V = 2m.
    CspDim {
        #[arg(long)]
        m: usize,
    },
    /// First contact prolongation of an algebra file.
    Prolong {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Nondegeneracy and Legendrian checks for a cubic form.
    CubicAnalyze {
        #[arg(long)]
        cubic: PathBuf,
    },
    /// Infinitesimal stabilizer of the Legendrian variety of a cubic.
    Stabilizer {
        #[arg(long)]
        cubic: PathBuf,
        #[arg(long, value_enum, default_value_t = AmbientArg::Csp)]
        ambient: AmbientArg,
    },
    /// Normalize a torsion tensor modulo the image of δ.
    Normalize {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        torsion: PathBuf,
    },
    /// Run the full scenario on a cubic, or audit a saved report.
    Verify {
        #[arg(long, required_unless_present = "report", conflicts_with = "report")]
        cubic: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AmbientArg {
    Csp,
    Gl,
}

impl From<AmbientArg> for Ambient {
    fn from(a: AmbientArg) -> Self {
        match a {
            AmbientArg::Csp => Ambient::Csp,
            AmbientArg::Gl => Ambient::Gl,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Input { path: String, source: InputError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Verification(_) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        }
    }
}

/// What a command produced: a human summary, a JSON value, and whether the
/// run counts as a verification failure.
struct Outcome {
    human: String,
    json: serde_json::Value,
    failed: bool,
}

impl Outcome {
    fn ok(human: String, value: impl Serialize) -> Self {
        Outcome {
            human,
            json: serde_json::to_value(value).expect("reports serialize"),
            failed: false,
        }
    }
}

pub fn parse_and_dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let seed = resolve_seed(cli.seed)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let outcome = pool.install(|| execute(&cli.command, seed))?;

    let write_err = |e: std::io::Error| CliError::Usage(format!("write failed: {e}"));
    let pretty = serde_json::to_string_pretty(&outcome.json).expect("JSON value");
    match &cli.json {
        None => writeln!(out, "{}", outcome.human).map_err(write_err)?,
        Some(None) => writeln!(out, "{pretty}").map_err(write_err)?,
        Some(Some(path)) => {
            std::fs::write(path, format!("{pretty}\n"))
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            writeln!(out, "{}", outcome.human).map_err(write_err)?;
        }
    }
    Ok(if outcome.failed { EXIT_VERIFY } else { EXIT_OK })
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{SEED_ENV}: expected an unsigned integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, InputError>) -> Result<T, CliError> {
    parse(&read_file(path)?).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

/// Rejects algebras outside csp(V); a false closure claim is a verification failure.
fn load_algebra(path: &Path) -> Result<LoadedAlgebra, CliError> {
    let loaded = load(path, parse_algebra)?;
    if let Some(i) = loaded.algebra.first_non_conformal() {
        return Err(CliError::Input {
            path: path.display().to_string(),
            source: InputError::Field {
                field: format!("basis[{i}]"),
                message: "not in csp(V)".into(),
            },
        });
    }
    let closed = loaded.algebra.closed();
    match loaded.claimed_closed {
        Some(true) if !closed => Err(CliError::Verification(format!(
            "{}: algebra is declared closed but is not closed under the bracket",
            path.display()
        ))),
        _ if !closed => Err(CliError::Usage(format!(
            "{}: algebra is not closed under the bracket",
            path.display()
        ))),
        _ => Ok(loaded),
    }
}

fn prolong_error(e: ProlongError) -> CliError {
    match e {
        ProlongError::KernelCheckFailed => CliError::Verification(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn legendrian_error(e: LegendrianError) -> CliError {
    match e {
        LegendrianError::Degenerate => CliError::Usage(e.to_string()),
        other => CliError::Verification(other.to_string()),
    }
}

#[derive(Serialize)]
struct CspDimReport {
    m: usize,
    dim: usize,
    #[serde(flatten)]
    algebra: AlgebraReport,
}

#[derive(Serialize)]
struct StabilizerReport {
    ambient: Ambient,
    samples_used: usize,
    dim: usize,
    #[serde(flatten)]
    algebra: AlgebraReport,
}

#[derive(Serialize)]
struct CubicAnalysis {
    cubic: CubicDigest,
    nondegenerate: bool,
    checks: Option<LegendrianChecks>,
}

#[derive(Serialize)]
struct AuditReport {
    audit: bool,
}

fn execute(command: &Command, seed: u64) -> Result<Outcome, CliError> {
    match command {
        Command::CspDim { m } => {
            let space =
                SymplecticSpace::standard(*m).map_err(|e| CliError::Usage(e.to_string()))?;
            let g = csp_basis(&space);
            let report = CspDimReport {
                m: *m,
                dim: g.dim(),
                algebra: g.report(),
            };
            Ok(Outcome::ok(g.dim().to_string(), report))
        }
        Command::Prolong { algebra } => {
            let loaded = load_algebra(algebra)?;
            let space = prolongation_space(&loaded.algebra).map_err(prolong_error)?;
            let report = space.report();
            let human = format!(
                "dim Hom(V, g) = {}\nrank δ = {}\nprolongation dim = {}",
                report.dim_hom, report.rank_delta, report.prolongation_dim
            );
            Ok(Outcome::ok(human, report))
        }
        Command::CubicAnalyze { cubic } => {
            let p = load(cubic, parse_cubic)?;
            analyze(&p, seed)
        }
        Command::Stabilizer { cubic, ambient } => {
            let p = load(cubic, parse_cubic)?;
            let stab = stabilizer_algebra(&p, (*ambient).into(), &SamplerConfig::with_seed(seed))
                .map_err(legendrian_error)?;
            let human = format!(
                "stabilizer dim = {} (ambient {}, {} samples)",
                stab.algebra.dim(),
                match stab.ambient {
                    Ambient::Csp => "csp",
                    Ambient::Gl => "gl",
                },
                stab.samples_used
            );
            let report = StabilizerReport {
                ambient: stab.ambient,
                samples_used: stab.samples_used,
                dim: stab.algebra.dim(),
                algebra: stab.algebra.report(),
            };
            Ok(Outcome::ok(human, report))
        }
        Command::Normalize { algebra, torsion } => {
            let loaded = load_algebra(algebra)?;
            let n = loaded.algebra.space().dim();
            let pi = load(torsion, |t| parse_torsion(t, n))?;
            let ctx = build_context(&loaded.algebra).map_err(prolong_error)?;
            let normalized = ctx.normalize(&pi);
            if !ctx.in_complement(&normalized.normalized) {
                return Err(CliError::Verification(
                    "normalized torsion left the complement".into(),
                ));
            }
            let report = normalized.report();
            let human = format!("unique: {}\ncoset_dim: {}", report.unique, report.coset_dim);
            Ok(Outcome::ok(human, report))
        }
        Command::Verify {
            cubic: Some(cubic), ..
        } => {
            let p = load(cubic, parse_cubic)?;
            let report = run_scenario(&p, &ScenarioConfig::with_seed(seed))
                .map_err(|e| CliError::Verification(e.to_string()))?;
            let audit = consistency_audit(&report);
            let mut outcome = Outcome::ok(scenario_summary(&report, audit), &report);
            outcome.failed = !audit;
            Ok(outcome)
        }
        Command::Verify {
            report: Some(path), ..
        } => {
            let report: ScenarioReport = load(path, |t| {
                serde_json::from_str(t).map_err(|e| InputError::Json(e.to_string()))
            })?;
            let audit = consistency_audit(&report);
            let human = format!("audit: {}", if audit { "PASS" } else { "FAIL" });
            let mut outcome = Outcome::ok(human, AuditReport { audit });
            outcome.failed = !audit;
            Ok(outcome)
        }
        Command::Verify { .. } => Err(CliError::Usage("verify needs --cubic or --report".into())),
    }
}

fn analyze(p: &CubicForm, seed: u64) -> Result<Outcome, CliError> {
    let nondegenerate = cubic_nondegenerate(p);
    let checks = if nondegenerate {
        Some(
            legendrian_checks(p, &ScenarioConfig::with_seed(seed))
                .map_err(|e| CliError::Verification(e.to_string()))?,
        )
    } else {
        None
    };
    let mut human = format!(
        "P = {}\nnondegenerate: {}\nambient dim V = {}",
        p.display(),
        nondegenerate,
        ambient_space(p).dim()
    );
    let failed = checks.as_ref().is_some_and(|c| !c.passed());
    if let Some(c) = &checks {
        human.push_str(&format!(
            "\nisotropic tangent spaces: {}\nosculating flag dims: {:?} ({})\ncone spans V: {}",
            c.isotropy_ok,
            c.flag_dims,
            if c.flags_ok { "ok" } else { "FAILED" },
            c.cone_spans
        ));
    }
    let report = CubicAnalysis {
        cubic: CubicDigest {
            n: p.n(),
            display: p.display(),
            monomials: p.monomials(),
        },
        nondegenerate,
        checks,
    };
    let mut outcome = Outcome::ok(human, report);
    outcome.failed = failed;
    Ok(outcome)
}

fn scenario_summary(r: &ScenarioReport, audit: bool) -> String {
    let mut lines = vec![
        format!("P = {}", r.cubic.display),
        format!("nondegenerate: {}", r.nondegenerate),
    ];
    if r.nondegenerate {
        lines.push(format!(
            "legendrian checks: {}",
            if r.legendrian_checks.as_ref().is_some_and(|c| c.passed()) {
                "ok"
            } else {
                "FAILED"
            }
        ));
        lines.push(format!(
            "stabilizer dim: {} (gl: {}, equal: {})",
            r.stabilizer_dim, r.stabilizer_gl_dim, r.gl_equals_csp
        ));
        lines.push(format!("prolongation dim: {}", r.prolongation_dim));
        let passed = r.identity_checks.iter().filter(|c| c.passed).count();
        lines.push(format!(
            "point identities: {passed}/{}",
            r.identity_checks.len()
        ));
        if let Some(w) = &r.euler_witness {
            lines.push(format!(
                "euler witness: {} ({} points)",
                if w.succeeded { "ok" } else { "FAILED" },
                w.points_tested
            ));
        }
        for a in &r.anomalies {
            lines.push(format!("anomaly: {a}"));
        }
    }
    lines.push(format!("audit: {}", if audit { "PASS" } else { "FAIL" }));
    lines.join("\n")
}
