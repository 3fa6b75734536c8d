//! `flatgeo` command-line front end.
//!
//! Points are given in chart coordinates: `--tri` names a triangle and `--x/--y`
//! are coordinates in that triangle's own plane. Angles are in radians, measured
//! counterclockwise from the chart's x axis.
//!
//! Exit codes: 0 success (or parallel), 1 negative verdict, 2 input error,
//! 3 IO error. Errors are printed to stdout as `{"error": kind, "message": ...}`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use flatgeo_core::analysis::{
    closed_geodesic_detect, default_scan_start, direction_scan, scan_csv, self_intersections, ScanOptions,
};
use flatgeo_core::builders::catalog;
use flatgeo_core::holonomy::{is_parallel, VerdictRecord};
use flatgeo_core::io::{read_surface, surface_to_json, to_json, IoError};
use flatgeo_core::render::{render, RenderMode, RenderSpec};
use flatgeo_core::tracer::{trace, TraceRecord};
use flatgeo_core::{
    tolerance_from_env, FlatSurface, GeodesicTrace, SurfacePoint, TangentDirection, Vec2, DEFAULT_VERTEX_CLEARANCE,
};

/// Tolerance used to decide that a trace has come back to its start.
const RECURRENCE_TOL: f64 = 1e-7;

#[derive(Parser)]
#[command(name = "flatgeo", version, about = "Geodesics and holonomy on flat surfaces with cone points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct StartArgs {
    /// Triangle whose chart holds the start point; found automatically if omitted.
    #[arg(long)]
    tri: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Unfolded,
    PerChart,
}

#[derive(Subcommand)]
enum Command {
    /// Check a surface file and print its invariants.
    Validate { path: PathBuf },
    /// Decide whether the surface is parallel.
    Classify { path: PathBuf },
    /// Trace one geodesic.
    Trace {
        path: PathBuf,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CLEARANCE)]
        clearance: f64,
        /// Write an SVG of the unfolded development here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Trace many directions from one point and classify each.
    Scan {
        path: PathBuf,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 100.0)]
        length: f64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CLEARANCE)]
        clearance: f64,
        /// Write the per-direction table here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write every catalog surface and a MANIFEST into a directory.
    Catalog { outdir: PathBuf },
    /// Draw a surface (and optionally a geodesic) as SVG.
    Render {
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::PerChart)]
        mode: Mode,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 600)]
        height: u32,
        #[command(flatten)]
        start: StartArgs,
        /// Overlay the geodesic leaving the start point at this angle.
        #[arg(long, allow_hyphen_values = true)]
        angle: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        length: f64,
    },
}

/// Failure carrying its exit code and a stable kind name.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn input(kind: impl Into<String>, message: impl ToString) -> Self {
        Failure { code: 2, kind: kind.into(), message: message.to_string() }
    }

    fn io(message: impl ToString) -> Self {
        Failure { code: 3, kind: "Io".into(), message: message.to_string() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(_) => Failure::io(e),
            _ => Failure::input(e.kind(), e),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Classify { path } => cmd_classify(&path),
        Command::Trace { path, start, angle, length, clearance, svg } => {
            cmd_trace(&path, &start, angle, length, clearance, svg.as_deref())
        }
        Command::Scan { path, start, n, length, epsilon, seed, samples, clearance, csv } => {
            let options = ScanOptions { vertex_clearance: clearance, density_samples: samples };
            cmd_scan(&path, &start, n, length, epsilon, seed, options, csv.as_deref())
        }
        Command::Catalog { outdir } => cmd_catalog(&outdir),
        Command::Render { path, out, mode, width, height, start, angle, length } => {
            cmd_render(&path, &out, mode, width, height, &start, angle, length)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            println!("{}", to_json(&json!({ "error": f.kind, "message": f.message })));
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<FlatSurface, Failure> {
    Ok(read_surface(path, tolerance_from_env())?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn invariants(s: &FlatSurface) -> serde_json::Value {
    json!({
        "triangles": s.triangles().len(),
        "vertices": s.vertices().len(),
        "euler_characteristic": s.euler_characteristic(),
        "orientable": s.is_orientable(),
        "curvatures": s.curvature_multiset(),
        "gauss_bonnet_residual": s.gauss_bonnet_residual(),
    })
}

fn cmd_validate(path: &Path) -> CmdResult {
    let s = load(path)?;
    let mut report = invariants(&s);
    report["valid"] = json!(true);
    println!("{}", to_json(&report));
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(path: &Path) -> CmdResult {
    let s = load(path)?;
    let verdict = is_parallel(&s);
    println!("{}", to_json(&VerdictRecord::new(&s, &verdict)));
    Ok(if verdict.is_parallel() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Resolve the start point; without `--tri`, pick the lowest-id triangle containing
/// the point into which `dir` (if any) points.
fn start_point(s: &FlatSurface, args: &StartArgs, dir: Option<Vec2>) -> Result<SurfacePoint, Failure> {
    let (x, y) = match (args.x, args.y) {
        (Some(x), Some(y)) => (x, y),
        (None, None) => {
            return match args.tri {
                None => Ok(default_scan_start(s)),
                Some(t) if t < s.triangles().len() => Ok(SurfacePoint::new(t, s.triangle(t).incenter())),
                Some(t) => Err(Failure::input("NoSuchTriangle", format!("triangle {t} does not exist"))),
            };
        }
        _ => return Err(Failure::input("InvalidArgument", "--x and --y must be given together")),
    };
    let p = Vec2::new(x, y);
    if let Some(t) = args.tri {
        return Ok(SurfacePoint::new(t, p));
    }
    let tol = s.tolerance();
    let candidates = s.triangles_containing(p, None);
    let inward = |t: usize| match dir {
        None => true,
        Some(d) => {
            let tri = s.triangle(t);
            let step = d.normalized() * (tri.diameter() * 1e-6);
            (0..3).all(|k| tri.edge_height(k, p) > tol || tri.edge_height(k, p + step) > tri.edge_height(k, p))
        }
    };
    candidates
        .iter()
        .copied()
        .find(|&t| inward(t))
        .map(|t| SurfacePoint::new(t, p))
        .ok_or_else(|| Failure::input("StartOutsideTriangle", format!("no triangle contains ({x}, {y})")))
}

fn run_trace(
    s: &FlatSurface,
    start: &StartArgs,
    angle: f64,
    length: f64,
    clearance: f64,
) -> Result<GeodesicTrace, Failure> {
    let dir = Vec2::new(angle.cos(), angle.sin());
    let p = start_point(s, start, Some(dir))?;
    trace(s, TangentDirection::new(p.triangle, p.coords, dir), length, clearance)
        .map_err(|e| Failure::input(e.kind(), e))
}

fn cmd_trace(path: &Path, start: &StartArgs, angle: f64, length: f64, clearance: f64, svg: Option<&Path>) -> CmdResult {
    let s = load(path)?;
    let tr = run_trace(&s, start, angle, length, clearance)?;
    let mut out = serde_json::to_value(TraceRecord::from(&tr)).expect("trace record serializes");
    if let flatgeo_core::Termination::VertexHit { vertex, param } = tr.termination {
        out["vertex"] = json!(vertex);
        out["param"] = json!(param);
    }
    out["start_triangle"] = json!(tr.start.at.triangle);
    out["closed_period"] = json!(closed_geodesic_detect(&s, &tr, RECURRENCE_TOL));
    out["self_intersections"] = json!(self_intersections(&s, &tr).len());
    if let Some(svg) = svg {
        let doc = render(&s, Some(&tr), &RenderSpec::default()).map_err(|e| Failure::input("Render", e))?;
        write_file(svg, &doc)?;
    }
    println!("{}", to_json(&out));
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    path: &Path,
    start: &StartArgs,
    n: usize,
    length: f64,
    epsilon: f64,
    seed: u64,
    options: ScanOptions,
    csv: Option<&Path>,
) -> CmdResult {
    let s = load(path)?;
    if n == 0 || !(length.is_finite() && length > 0.0) || !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Failure::input("InvalidArgument", "n, length and epsilon must be positive"));
    }
    let p = start_point(&s, start, None)?;
    if p.triangle >= s.triangles().len() || !s.triangle(p.triangle).contains(p.coords, s.tolerance()) {
        return Err(Failure::input("StartOutsideTriangle", "start point lies outside its triangle"));
    }
    let rows = direction_scan(&s, p, n, length, epsilon, seed, options);
    let table = scan_csv(&rows);
    let count = |name: &str| rows.iter().filter(|r| r.verdict.name() == name).count();
    let completed = rows.iter().filter(|r| r.verdict.completed()).count();
    let simple = count("Simple");
    let summary = json!({
        "start_triangle": p.triangle,
        "start": [p.coords.x, p.coords.y],
        "directions": n,
        "completed": completed,
        "simple": simple,
        "self_intersecting": count("SelfIntersecting"),
        "vertex_hits": count("VertexHit"),
        "failed": count("Failed"),
        "simple_fraction": if completed > 0 { Some(simple as f64 / completed as f64) } else { None },
    });
    match csv {
        Some(out) => {
            write_file(out, &table)?;
            println!("{}", to_json(&summary));
        }
        None => print!("{table}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog(outdir: &Path) -> CmdResult {
    std::fs::create_dir_all(outdir).map_err(|e| Failure::io(format!("{}: {e}", outdir.display())))?;
    let mut manifest = Vec::new();
    for entry in catalog() {
        let file = format!("{}.json", entry.name);
        write_file(&outdir.join(&file), &surface_to_json(&entry.surface))?;
        let s = &entry.surface;
        manifest.push(json!({
            "name": entry.name,
            "file": file,
            "euler_characteristic": s.euler_characteristic(),
            "orientable": s.is_orientable(),
            "curvatures": s.curvature_multiset(),
            "parallel": is_parallel(s).is_parallel(),
        }));
    }
    write_file(&outdir.join("MANIFEST"), &(to_json(&manifest) + "\n"))?;
    println!("{}", to_json(&json!({ "entries": manifest.len(), "outdir": outdir.display().to_string() })));
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    path: &Path,
    out: &Path,
    mode: Mode,
    width: u32,
    height: u32,
    start: &StartArgs,
    angle: Option<f64>,
    length: f64,
) -> CmdResult {
    let s = load(path)?;
    let tr = match angle {
        Some(a) => Some(run_trace(&s, start, a, length, DEFAULT_VERTEX_CLEARANCE)?),
        None => None,
    };
    let spec = RenderSpec {
        width,
        height,
        mode: match mode {
            Mode::Unfolded => RenderMode::Unfolded,
            Mode::PerChart => RenderMode::PerChart,
        },
        ..RenderSpec::default()
    };
    let doc = render(&s, tr.as_ref(), &spec).map_err(|e| Failure::input("InvalidArgument", e))?;
    write_file(out, &doc)?;
    Ok(ExitCode::SUCCESS)
}
