//! `joints`: command-line front end.
//!
//! Exit status: 0 when the command ran and every check passed, 1 when a
//! check failed, 2 on usage, input or I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use joints_core::coloring::{color_from_prune, color_incremental, pigeonhole_finish};
use joints_core::curves::{
    curve_lemma_bound_check, prune_curves, verify_curve_joint, CurveFamily,
};
use joints_core::generators::{grid_lines, parabola_grid, random_concurrent_lines, random_lines, star_bundle};
use joints_core::io::{
    read_json, to_json_string, write_json_atomic, CertificatesDocument, IoError, JointsDocument,
    PointSet, PointsDocument,
};
use joints_core::lemma::{lemma_bound_check, run_annihilation, AnnihilationMode};
use joints_core::pruning::{prune, verify_trace};
use joints_core::report::{report, CSV_HEADER};
use joints_core::{
    brute_force_joints, detect_joints, min_vanishing_degree, vanishing_polynomial, Arrangement,
    JointsError, MultiPoly,
};

#[derive(Parser)]
#[command(name = "joints", version, about = "Exact-arithmetic workbench for joints of lines and curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated arrangement or curve family.
    Generate {
        #[command(subcommand)]
        kind: Generate,
    },
    /// Detect the joints of an arrangement.
    Joints {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Cross-check against the brute-force detector.
        #[arg(long)]
        oracle: bool,
    },
    /// Prune lines until no joint is left and check the resulting bound.
    Prune {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Replay the trace with the brute-force detector.
        #[arg(long)]
        verify: bool,
    },
    /// Assign every joint to one of its lines with small fibers.
    Color {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Prune)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a lowest-degree polynomial vanishing on a point set.
    Vanish {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the line lemma on a joint set, optionally running the
    /// derivative chain of a polynomial over it.
    Lemma {
        #[arg(long)]
        input: PathBuf,
        /// Points or joints document; defaults to every joint.
        #[arg(long)]
        joints: Option<PathBuf>,
        #[arg(long)]
        annihilate: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
    },
    /// Work with polynomial curve families and joint certificates.
    Curves {
        #[command(subcommand)]
        action: CurvesAction,
    },
    /// One-row summary of an arrangement.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// Axis-parallel lines through the grid {0..k-1}^dim.
    Grid {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lines with random small integer entries.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw base points from a pool of this many points.
        #[arg(long)]
        pool: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lines through the origin.
    Star {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two pencils of k planar parabolas crossing in k^2 joints.
    Parabolas {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        certs_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CurvesAction {
    Verify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        certs: PathBuf,
    },
    Lemma {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        certs: PathBuf,
    },
    Prune {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        certs: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Prune,
    Incremental,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Demonstration,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Check(String),
    Usage(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<JointsError> for Failure {
    fn from(e: JointsError) -> Self {
        match e {
            JointsError::VerificationFailed { .. }
            | JointsError::ContradictionDetected(_)
            | JointsError::UncoveredJoint(_)
            | JointsError::UnverifiedCertificate(_)
            | JointsError::InternalInvariantViolation(_)
            | JointsError::LinePrecondition { .. }
            | JointsError::PointPrecondition { .. } => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => write_json_atomic(path, value)?,
        None => println!("{}", to_json_string(value)),
    }
    Ok(())
}

fn check(ok: bool, what: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(what.into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Generate { kind } => generate(kind),
        Command::Joints {
            input,
            output,
            oracle,
        } => {
            let arr: Arrangement = read_json(&input)?;
            let joints = detect_joints(&arr);
            eprintln!("{} joints on {} lines", joints.len(), arr.len());
            let doc = JointsDocument {
                dimension: arr.dimension(),
                joints,
            };
            emit(&doc, output.as_deref())?;
            if oracle {
                check(brute_force_joints(&arr) == doc.joints, "brute-force detector disagrees")?;
                eprintln!("oracle agrees");
            }
            Ok(())
        }
        Command::Prune {
            input,
            trace_out,
            verify,
        } => {
            let arr: Arrangement = read_json(&input)?;
            let trace = prune(&arr)?;
            let b = &trace.bound;
            eprintln!(
                "m = {}, {} steps, bound {} <= {}*{}",
                trace.m,
                trace.steps.len(),
                b.joints,
                trace.m - 1,
                b.lines
            );
            emit(&trace, trace_out.as_deref())?;
            if verify {
                verify_trace(&trace, &arr)?;
                eprintln!("trace verified");
            }
            check(b.holds(), "joint bound fails")
        }
        Command::Color { input, method, out } => {
            let arr: Arrangement = read_json(&input)?;
            let coloring = match method {
                Method::Prune => color_from_prune(&prune(&arr)?, &arr)?,
                Method::Incremental => color_incremental(&arr)?,
            };
            let report = pigeonhole_finish(&coloring, &arr)?;
            eprintln!(
                "max fiber {} (floor {}, cap {})",
                report.max_fiber, report.pigeonhole_floor, report.threshold
            );
            emit(&json!({ "coloring": coloring, "report": report }), out.as_deref())?;
            check(report.holds, "fiber bound fails")
        }
        Command::Vanish { points, out } => {
            let doc: PointsDocument = read_json(&points)?;
            let q = vanishing_polynomial(doc.dimension, &doc.points)?;
            let threshold = min_vanishing_degree(doc.points.len(), doc.dimension);
            let degree = q.degree().unwrap_or(0);
            eprintln!("degree {degree} (threshold {threshold})");
            emit(&q, out.as_deref())?;
            for p in &doc.points {
                check(q.evaluate(p)?.is_zero(), format!("nonzero at {p}"))?;
            }
            check(!q.is_zero() && degree <= threshold, "degree above threshold")
        }
        Command::Lemma {
            input,
            joints,
            annihilate,
            mode,
        } => {
            let arr: Arrangement = read_json(&input)?;
            let points = match joints {
                Some(path) => read_json::<PointSet>(&path)?.into_points(),
                None => detect_joints(&arr).into_iter().map(|j| j.point).collect(),
            };
            let lemma = lemma_bound_check(&points, &arr)?;
            let certificate = match annihilate {
                Some(path) => {
                    let q: MultiPoly = read_json(&path)?;
                    let mode = match mode {
                        Mode::Strict => AnnihilationMode::Strict,
                        Mode::Demonstration => AnnihilationMode::Demonstration,
                    };
                    Some(run_annihilation(&points, &arr, &q, mode)?)
                }
                None => None,
            };
            eprintln!(
                "|J'| = {}, m* = {}, bound {}",
                lemma.j_count, lemma.m_star, lemma.lower_bound
            );
            emit(&json!({ "lemma": lemma, "annihilation": certificate }), None)?;
            check(lemma.holds, "lemma bound fails")
        }
        Command::Curves { action } => curves(action),
        Command::Report { input, format } => {
            let arr: Arrangement = read_json(&input)?;
            let r = report(&arr)?;
            match format {
                Format::Csv => {
                    println!("{CSV_HEADER}");
                    println!("{}", r.csv_row());
                }
                Format::Json => emit(&r, None)?,
            }
            check(r.bound_holds(), "joint bound fails")
        }
    }
}

fn generate(kind: Generate) -> Outcome {
    match kind {
        Generate::Grid { dim, k, out } => {
            if dim < 2 || k == 0 {
                return Err(Failure::Usage("grid needs --dim >= 2 and --k >= 1".into()));
            }
            emit(&grid_lines(dim, k), out.as_deref())
        }
        Generate::Random {
            dim,
            count,
            seed,
            pool,
            out,
        } => {
            let arr = match pool {
                Some(p) => random_concurrent_lines(dim, count, p, seed)?,
                None => random_lines(dim, count, seed)?,
            };
            emit(&arr, out.as_deref())
        }
        Generate::Star { dim, count, out } => emit(&star_bundle(dim, count)?, out.as_deref()),
        Generate::Parabolas { k, out, certs_out } => {
            let (family, certificates) = parabola_grid(k);
            let doc = CertificatesDocument {
                dimension: family.dimension,
                certificates,
            };
            match (out, certs_out) {
                (Some(f), Some(c)) => {
                    write_json_atomic(&f, &family)?;
                    write_json_atomic(&c, &doc)?;
                }
                (out, None) => emit(&json!({ "family": family, "certificates": doc }), out.as_deref())?,
                (None, Some(c)) => {
                    println!("{}", to_json_string(&family));
                    write_json_atomic(&c, &doc)?;
                }
            }
            Ok(())
        }
    }
}

fn load_curves(family: &Path, certs: &Path) -> Result<(CurveFamily, CertificatesDocument), Failure> {
    let family: CurveFamily = read_json(family)?;
    let certs: CertificatesDocument = read_json(certs)?;
    if certs.dimension != family.dimension {
        return Err(Failure::Usage(format!(
            "certificates are in dimension {}, family in {}",
            certs.dimension, family.dimension
        )));
    }
    Ok((family, certs))
}

fn curves(action: CurvesAction) -> Outcome {
    match action {
        CurvesAction::Verify { family, certs } => {
            let (family, doc) = load_curves(&family, &certs)?;
            let results = doc
                .certificates
                .iter()
                .map(|c| verify_curve_joint(c, &family))
                .collect::<Result<Vec<bool>, _>>()?;
            let verified = results.iter().filter(|&&ok| ok).count();
            eprintln!("{verified} of {} certificates verify", results.len());
            emit(&json!({ "verified": results }), None)?;
            check(verified == results.len(), "unverified certificates")
        }
        CurvesAction::Lemma { family, certs } => {
            let (family, doc) = load_curves(&family, &certs)?;
            let r = curve_lemma_bound_check(&doc.certificates, &family)?;
            emit(&r, None)?;
            check(r.holds, "curve lemma bound fails")
        }
        CurvesAction::Prune { family, certs } => {
            let (family, doc) = load_curves(&family, &certs)?;
            let trace = prune_curves(&doc.certificates, &family)?;
            eprintln!(
                "m = {}, {} steps, bound {} <= {}*{}",
                trace.m,
                trace.steps.len(),
                trace.initial_joint_count,
                trace.m - 1,
                trace.initial_curve_count
            );
            emit(&trace, None)?;
            check(trace.bound_holds, "curve joint bound fails")
        }
    }
}
