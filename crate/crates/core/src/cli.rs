//! Command-line front end: argument definitions and the report-producing
//! drivers behind each subcommand.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
//! input (unreadable or malformed scenes, invalid flags), 3 when the geometry
//! violates a precondition of the requested computation.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::approx::{approximability_ladder, det_identity_trials, DEFAULT_EPS_LADDER, DEFAULT_GRID};
use crate::crofton::{crofton_estimate, CroftonConfig};
use crate::curvature::{curvature_localized_with, curvature_union_with, AngleConfig};
use crate::error::Error;
use crate::ncycle::{
    bruteforce_scales, classify_slice, index, index_bruteforce, slice_trials, NormalQuery, SliceOutcome,
    SliceTrialSummary,
};
use crate::polyhedra::{euler, ConvexPolytope, Halfspace};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::report::{Check, Report};
use crate::scene::{Scene, SceneError};

#[derive(Debug, Parser)]
#[command(name = "curvkit", version, about = "Curvature measures and normal-cycle checks for polyhedral sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Total (or window-localized) curvatures C_0..C_d, with C_0 compared to the Euler characteristic.
    Curvature {
        scene: PathBuf,
        /// Localize to a window given as `n1,..,nd:b;...` (halfspaces n·x <= b).
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Monte Carlo samples per external angle of rank four or more.
        #[arg(long, default_value_t = 200_000)]
        angle_samples: usize,
    },
    /// Slice identity: index sums against Euler characteristics of random halfspace sections.
    GaussBonnet {
        scene: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Extra halfspaces `v1,..,vd:t;...` checked after the random ones.
        #[arg(long)]
        include: Option<String>,
    },
    /// Monte Carlo check of the Crofton formula for C_k over random m-flats.
    Crofton {
        scene: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Determinant difference identity on random matrix pairs.
    Detlemma {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also check exact equality on dyadic rational matrices.
        #[arg(long)]
        exact: bool,
    },
    /// Hessian-minor bounds for the scene's d.c. functions across a ladder of mollifier widths.
    Approx {
        scene: PathBuf,
        /// Comma-separated mollifier widths relative to the half width of the scene box.
        #[arg(long)]
        eps_ladder: Option<String>,
        /// Grid nodes per mollifier width.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Minor order; all orders 1..=d when omitted.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Normal-cycle index at a point and direction.
    Index {
        scene: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        normal: String,
        /// Cross-check against the direct local Euler-characteristic formula.
        #[arg(long)]
        bruteforce: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Curvature { .. } => "curvature",
            Command::GaussBonnet { .. } => "gauss-bonnet",
            Command::Crofton { .. } => "crofton",
            Command::Detlemma { .. } => "detlemma",
            Command::Approx { .. } => "approx",
            Command::Index { .. } => "index",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("geometry error: {0}")]
    Geometry(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Geometry(_) => 3,
        }
    }
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::Io(_) | SceneError::Parse(_) => CliError::Input(e.to_string()),
            SceneError::Geometry(g) => CliError::Geometry(g.to_string()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::ZeroNormal => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Geometry(e.to_string()),
        }
    }
}

pub fn exit_code(outcome: &Result<Report, CliError>) -> i32 {
    match outcome {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}

/// Comma-separated rationals.
pub fn parse_vector(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',').map(|x| parse_rat(x).map_err(CliError::from)).collect()
}

/// Halfspaces written `n1,..,nd:b` and separated by `;`.
pub fn parse_halfspaces(s: &str, d: usize) -> Result<Vec<Halfspace>, CliError> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (n, b) = t.split_once(':').ok_or_else(|| CliError::Input(format!("halfspace {t:?} lacks ':'")))?;
            let n = parse_vector(n)?;
            if n.len() != d {
                return Err(CliError::Input(format!("halfspace {t:?} has {} coordinates, expected {d}", n.len())));
            }
            Ok(Halfspace::new(n, parse_rat(b)?)?)
        })
        .collect()
}

fn parse_ladder(s: &str) -> Result<Vec<f64>, CliError> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad ladder value {x:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if v.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(CliError::Input("ladder values must be positive".into()));
    }
    Ok(v)
}

fn exact_or_float(exact: &Option<Rat>, value: f64) -> serde_json::Value {
    match exact {
        Some(r) => json!(format_rat(r)),
        None => json!(value),
    }
}

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    let args = serde_json::to_value(cmd).expect("arguments serialize");
    match cmd {
        Command::Curvature { scene, window, seed, angle_samples } => {
            cmd_curvature(Report::new("curvature", args, Some(*seed)), scene, window.as_deref(), *seed, *angle_samples)
        }
        Command::GaussBonnet { scene, samples, seed, include } => {
            cmd_gauss_bonnet(Report::new("gauss-bonnet", args, Some(*seed)), scene, *samples, *seed, include.as_deref())
        }
        Command::Crofton { scene, k, m, samples, seed } => {
            cmd_crofton(Report::new("crofton", args, Some(*seed)), scene, *k, *m, *samples, *seed)
        }
        Command::Detlemma { dim, trials, seed, exact } => {
            cmd_detlemma(Report::new("detlemma", args, Some(*seed)), *dim, *trials, *seed, *exact)
        }
        Command::Approx { scene, eps_ladder, grid, m } => {
            cmd_approx(Report::new("approx", args, None), scene, eps_ladder.as_deref(), *grid, *m)
        }
        Command::Index { scene, point, normal, bruteforce } => {
            cmd_index(Report::new("index", args, None), scene, point, normal, *bruteforce)
        }
    }
}

fn cmd_curvature(
    mut report: Report,
    scene: &Path,
    window: Option<&str>,
    seed: u64,
    angle_samples: usize,
) -> Result<Report, CliError> {
    let scene = Scene::load(scene)?;
    let cfg = AngleConfig { samples: angle_samples, seed };
    let start = Instant::now();
    let curv = match window {
        Some(w) => {
            let hs = parse_halfspaces(w, scene.dimension)?;
            let win = ConvexPolytope::new(scene.dimension, hs)?;
            curvature_localized_with(&scene.union, &win, &cfg)?
        }
        None => curvature_union_with(&scene.union, &cfg)?,
    };
    report.time("curvature", start.elapsed());
    if window.is_none() {
        let chi = euler(&scene.union)?;
        let c0 = &curv.entries[0];
        report.push(Check::verdict(
            "C0 equals Euler characteristic",
            exact_or_float(&c0.exact, c0.value),
            chi,
            if c0.exact.is_some() { 0.0 } else { 1e-9 + 4.0 * c0.error },
            "Euler characteristic by nerve inclusion-exclusion",
            curv.euler(1e-9) == Some(chi),
        ));
    }
    report.details = json!({
        "dimension": scene.dimension,
        "localized": window.is_some(),
        "exact": curv.is_exact(),
        "curvatures": curv.view(),
    });
    Ok(report)
}

fn outcome_label(o: &SliceOutcome) -> serde_json::Value {
    match o {
        SliceOutcome::Touching => json!({"outcome": "touching"}),
        SliceOutcome::Degenerate(_) => json!({"outcome": "degenerate"}),
        SliceOutcome::Checked(r) => json!({"outcome": "checked", "sum": r.sum, "euler": r.euler}),
    }
}

fn cmd_gauss_bonnet(
    mut report: Report,
    scene: &Path,
    samples: usize,
    seed: u64,
    include: Option<&str>,
) -> Result<Report, CliError> {
    let scene = Scene::load(scene)?;
    let extra = include.map(|s| parse_halfspaces(s, scene.dimension)).transpose()?.unwrap_or_default();
    let start = Instant::now();
    let random = slice_trials(&scene.union, samples, seed)?;
    let mut crafted = SliceTrialSummary::default();
    let mut crafted_outcomes = Vec::new();
    for h in &extra {
        let o = classify_slice(&scene.union, h.normal(), h.offset())?;
        crafted.record(h.normal(), h.offset(), &o);
        crafted_outcomes.push(outcome_label(&o));
    }
    report.time("slices", start.elapsed());
    report.push(Check::exact(
        "slice sums equal sectional Euler characteristics",
        random.passed + crafted.passed,
        random.checked + crafted.checked,
        "Euler characteristic of the section by inclusion-exclusion",
    ));
    let rate = random.rejection_rate();
    report.push(Check::verdict(
        "random halfspaces rejected as touching or degenerate",
        rate,
        0.0,
        0.01,
        "touching halfspaces form a null set",
        rate <= 0.01,
    ));
    report.details = json!({"random": random, "included": crafted, "included_outcomes": crafted_outcomes});
    Ok(report)
}

fn cmd_crofton(
    mut report: Report,
    scene: &Path,
    k: usize,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<Report, CliError> {
    let scene = Scene::load(scene)?;
    let d = scene.dimension;
    if k > m || m > d {
        return Err(CliError::Input(format!("need 0 <= k <= m <= d, got k={k}, m={m}, d={d}")));
    }
    let start = Instant::now();
    let est = crofton_estimate(&scene.union, k, m, &CroftonConfig::new(samples, seed))?;
    report.time("crofton", start.elapsed());
    report.push(Check::within(
        "mean within three standard errors",
        est.mean,
        est.reference,
        3.0 * est.std_error,
        "Crofton constant times the total curvature of the scene",
    ));
    let rel = if est.reference != 0.0 { est.std_error / est.reference.abs() } else { est.std_error };
    report.push(Check::verdict("relative standard error", rel, 0.0, 0.03, "sampling budget", rel <= 0.03));
    report.details = serde_json::to_value(&est).expect("estimate serializes");
    Ok(report)
}

fn cmd_detlemma(mut report: Report, dim: usize, trials: usize, seed: u64, exact: bool) -> Result<Report, CliError> {
    if dim == 0 || trials == 0 {
        return Err(CliError::Input("--dim and --trials must be positive".into()));
    }
    let start = Instant::now();
    let s = det_identity_trials(dim, trials, seed, exact)?;
    report.time("identity", start.elapsed());
    if let Some(hits) = s.exact_matches {
        report.push(Check::exact("exact equality on rational pairs", hits, trials, "identity of polynomials"));
    }
    report.push(Check::verdict(
        "floating relative discrepancy",
        s.float_max_error,
        0.0,
        s.float_tolerance,
        "identity of polynomials",
        s.float_max_error <= s.float_tolerance,
    ));
    report.details = serde_json::to_value(&s).expect("summary serializes");
    Ok(report)
}

fn cmd_approx(
    mut report: Report,
    scene: &Path,
    ladder: Option<&str>,
    grid: usize,
    m: Option<usize>,
) -> Result<Report, CliError> {
    let scene = Scene::load(scene)?;
    if scene.dc_functions.is_empty() {
        return Err(CliError::Input("scene has no dc_functions".into()));
    }
    let d = scene.dimension;
    let ladder = ladder.map(parse_ladder).transpose()?.unwrap_or_else(|| DEFAULT_EPS_LADDER.to_vec());
    if grid < 2 {
        return Err(CliError::Input("--grid must be at least 2".into()));
    }
    let orders: Vec<usize> = match m {
        Some(m) if m == 0 || m > d => return Err(CliError::Input(format!("--m must lie in 1..={d}"))),
        Some(m) => vec![m],
        None => (1..=d).collect(),
    };
    let k = scene.bounding_box()?;
    let start = Instant::now();
    let mut details = Vec::new();
    for (i, f) in scene.dc_functions.iter().enumerate() {
        for &m in &orders {
            let lad = approximability_ladder(f, &k, m, &ladder, grid)?;
            report.push(Check::verdict(
                format!("function {i}, order {m}: ladder spread"),
                lad.spread,
                0.0,
                lad.tolerance,
                "uniform bound across mollifier widths",
                lad.spread < lad.tolerance,
            ));
            let worst = lad.rungs.iter().map(|r| r.lhs - r.rhs - r.slack).fold(f64::NEG_INFINITY, f64::max);
            report.push(Check::verdict(
                format!("function {i}, order {m}: lhs <= rhs + slack on every rung"),
                worst,
                0.0,
                0.0,
                "determinant identity applied to convex combinations",
                lad.rungs.iter().all(|r| r.holds()),
            ));
            details.push(json!({"function": i, "ladder": lad}));
        }
    }
    report.time("approx", start.elapsed());
    report.details = json!({
        "box": {"lo": k.lo().iter().map(format_rat).collect::<Vec<_>>(), "hi": k.hi().iter().map(format_rat).collect::<Vec<_>>()},
        "eps_scale": k.half_width(),
        "results": details,
    });
    Ok(report)
}

fn cmd_index(
    mut report: Report,
    scene: &Path,
    point: &str,
    normal: &str,
    bruteforce: bool,
) -> Result<Report, CliError> {
    let scene = Scene::load(scene)?;
    let x = parse_vector(point)?;
    let n = parse_vector(normal)?;
    if x.len() != scene.dimension || n.len() != scene.dimension {
        return Err(CliError::Input(format!("point and normal need {} coordinates", scene.dimension)));
    }
    let q = NormalQuery::new(x, n)?;
    let iv = index(&scene.union, &q)?;
    let mut details = json!({"value": iv.value, "degenerate": iv.degenerate});
    if bruteforce {
        let (r, delta) = bruteforce_scales(&scene.union, &q)?;
        let b = index_bruteforce(&scene.union, &q, &r, &delta)?;
        details["bruteforce"] = json!({"value": b, "radius": format_rat(&r), "delta": format_rat(&delta)});
        if iv.degenerate {
            details["note"] = json!("degenerate direction: the index is not locally constant, comparison skipped");
        } else {
            report.push(Check::exact(
                "index equals local Euler-characteristic difference",
                iv.value,
                b,
                "direct box formula",
            ));
        }
    }
    report.details = details;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn parses_inline_lists() {
        assert_eq!(parse_vector("1/2, -3").unwrap(), vec![frac(1, 2), int(-3)]);
        let hs = parse_halfspaces("1,0:1/2; 0,1:3", 2).unwrap();
        assert_eq!(hs.len(), 2);
        assert_eq!(hs[0].offset(), &frac(1, 2));
        assert!(matches!(parse_halfspaces("1:0", 2), Err(CliError::Input(_))));
        assert!(matches!(parse_halfspaces("1,0", 2), Err(CliError::Input(_))));
        assert_eq!(parse_ladder("0.2,0.1").unwrap(), vec![0.2, 0.1]);
        assert!(parse_ladder("0.2,-1").is_err());
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::InvalidArgument("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(Error::Unbounded).exit_code(), 3);
        assert_eq!(CliError::from(SceneError::Parse("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(SceneError::Geometry(Error::Empty)).exit_code(), 3);
    }

    #[test]
    fn detlemma_report() {
        let r = run(&Command::Detlemma { dim: 3, trials: 20, seed: 5, exact: true }).unwrap();
        assert!(r.passed());
        assert_eq!(r.results[0].computed, json!(20));
        assert_eq!(exit_code(&Ok(r)), 0);
        assert_eq!(exit_code(&run(&Command::Detlemma { dim: 0, trials: 5, seed: 5, exact: false })), 2);
    }
}
