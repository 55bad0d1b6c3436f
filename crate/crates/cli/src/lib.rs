//! Command-line front end: argument model, field resolution and the CSV/OBJ
//! writers. `main` only maps [`CliError`] to an exit code.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heisenberg_surfaces::expr::parse;
use heisenberg_surfaces::gauss_map;
use heisenberg_surfaces::graph::{self, ExprSurface, Grid, Rect, SurfaceField};
use heisenberg_surfaces::translation::{
    family_curves, ode_solve_v_with, CurvePair, FlatGeneral, Normalization, TranslationFamily, TranslationSurface,
    V_ODE_ATOL, V_ODE_RTOL,
};
use heisenberg_surfaces::verify::{self, Status};
use heisenberg_surfaces::{CurveJet, Error};

pub const EXIT_OK: i32 = 0;
/// Some mandatory verification check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

const ROW_ORDER: &str = "Grid rows are written in row-major order: y is the outer loop (ascending), \
x the inner loop (ascending); both endpoints of each axis are included.";

#[derive(Debug, Parser)]
#[command(name = "h3surf", version, about = "Graph surfaces z = f(x, y) in the Heisenberg group H3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate K, H, det dphi and the minimal/flat residuals over a grid.
    #[command(after_help = ROW_ORDER)]
    Curvature(GridCmd),
    /// Sample the Gans-plane Gauss map and its Jacobian determinant.
    #[command(after_help = ROW_ORDER)]
    Gaussmap(GridCmd),
    /// Export the graph as a triangulated height field (Wavefront OBJ).
    #[command(after_help = ROW_ORDER)]
    Mesh(GridCmd),
    /// Run verification suites; exits 0 iff every mandatory check passes.
    Verify(VerifyCmd),
    /// Integrate (K1/(C1 - y) + K2) v'' = v' and sample y, v, v', v''.
    SolveOde(SolveOdeCmd),
}

#[derive(Debug, Args)]
pub struct GridCmd {
    #[command(flatten)]
    pub field: FieldArgs,
    /// x0 x1 y0 y1
    #[arg(long, num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], allow_negative_numbers = true,
          default_values_t = [-1.0, 1.0, -1.0, 1.0])]
    pub domain: Vec<f64>,
    /// nx ny (each at least 2)
    #[arg(long, num_args = 2, value_names = ["NX", "NY"], default_values_t = [11, 11])]
    pub grid: Vec<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyTag {
    MinimalEqm,
    FlatZeroDet,
    FlatPower,
    FlatGeneral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    SecondDerivative,
    PaperLiteral,
}

/// Where the surface comes from: `--f`, a `--u`/`--v` pair, or `--family`.
#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Height function f(x, y).
    #[arg(long = "f", value_name = "EXPR", conflicts_with_all = ["u", "v", "family"])]
    pub f: Option<String>,
    /// Translation-surface curve u(x); graph u + v + xy/2.
    #[arg(long, value_name = "EXPR", requires = "v", conflicts_with = "family")]
    pub u: Option<String>,
    /// Translation-surface curve v(y).
    #[arg(long, value_name = "EXPR", requires = "u", conflicts_with = "family")]
    pub v: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyTag>,
    #[command(flatten)]
    pub params: FamilyParams,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyParams {
    #[arg(long = "A", value_name = "A", allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long = "C", value_name = "C", allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long = "A1", value_name = "A1", allow_negative_numbers = true)]
    pub a1: Option<f64>,
    #[arg(long = "B", value_name = "B", allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long = "C1", value_name = "C1", allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long = "C2", value_name = "C2", allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long = "C3", value_name = "C3", allow_negative_numbers = true)]
    pub c3: Option<f64>,
    #[arg(long = "K1", value_name = "K1", allow_negative_numbers = true)]
    pub k1: Option<f64>,
    #[arg(long = "K2", value_name = "K2", allow_negative_numbers = true)]
    pub k2: Option<f64>,
    /// v(y0); default 0.
    #[arg(long = "v0", allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// v'(y0); default 1.
    #[arg(long = "v0prime", allow_negative_numbers = true)]
    pub v0prime: Option<f64>,
    /// Initial abscissa of the v equation; defaults to the start of the y range.
    #[arg(long = "y0", allow_negative_numbers = true)]
    pub y0: Option<f64>,
    #[arg(long, value_enum, default_value_t = NormalizationArg::SecondDerivative)]
    pub normalization: NormalizationArg,
    /// Relative tolerance for the v equation.
    #[arg(long, default_value_t = V_ODE_RTOL)]
    pub rtol: f64,
    /// Absolute tolerance for the v equation.
    #[arg(long, default_value_t = V_ODE_ATOL)]
    pub atol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    /// Suite name or "all": brioschi, weingarten, planes, minimal-family,
    /// flat-zero-det, gauss-jacobian, equivariance, gauss-differential, ode,
    /// residual-reports, non-existence.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Machine-readable summary (name,status,max_error per check).
    #[arg(long, default_value = "verify-summary.csv")]
    pub summary: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveOdeCmd {
    #[command(flatten)]
    pub params: FamilyParams,
    /// y interval to integrate over.
    #[arg(long, num_args = 2, value_names = ["Y0", "Y1"], allow_negative_numbers = true,
          default_values_t = [0.0, 1.0])]
    pub span: Vec<f64>,
    /// Number of evenly spaced output rows (at least 2).
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self { code: EXIT_RUNTIME, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidParameter(_) | Error::EmptyGrid | Error::TooFewPoints { .. } => {
                Self::usage(e.to_string())
            }
            _ => Self::runtime(e.to_string()),
        }
    }
}

/// Attach the failing grid point to an evaluation error.
fn at_point(x: f64, y: f64) -> impl FnOnce(Error) -> CliError {
    move |e| {
        let mut c = CliError::from(e);
        c.message = format!("at (x, y) = ({x}, {y}): {}", c.message);
        c
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// 17 significant digits: round-trips every `f64`. Negative zero is
/// written as `0`.
pub fn num(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

fn need(name: &str, v: Option<f64>) -> CliResult<f64> {
    v.ok_or_else(|| CliError::usage(format!("this family needs --{name}")))
}

fn general_params(p: &FamilyParams, y_start: f64) -> CliResult<FlatGeneral> {
    Ok(FlatGeneral {
        c1: p.c1.unwrap_or(0.0),
        c2: p.c2.unwrap_or(1.0),
        c3: p.c3.unwrap_or(1.0),
        k1: p.k1.unwrap_or(0.0),
        k2: p.k2.unwrap_or(1.0),
        v0: p.v0.unwrap_or(0.0),
        v0prime: p.v0prime.unwrap_or(1.0),
        y_init: p.y0.unwrap_or(y_start),
    })
}

pub fn family_from_args(tag: FamilyTag, p: &FamilyParams, y_start: f64) -> CliResult<TranslationFamily> {
    let fam = match tag {
        FamilyTag::MinimalEqm => TranslationFamily::MinimalEqm { c: need("C", p.c)? },
        FamilyTag::FlatZeroDet => TranslationFamily::FlatZeroDet { a: need("A", p.a)?, c: need("C", p.c)? },
        FamilyTag::FlatPower => TranslationFamily::FlatPower {
            a: need("A", p.a)?,
            a1: p.a1.unwrap_or(0.0),
            b: need("B", p.b)?,
            normalization: match p.normalization {
                NormalizationArg::SecondDerivative => Normalization::SecondDerivative,
                NormalizationArg::PaperLiteral => Normalization::PaperLiteral,
            },
        },
        FamilyTag::FlatGeneral => TranslationFamily::FlatGeneral(general_params(p, y_start)?),
    };
    fam.validate()?;
    Ok(fam)
}

fn check_tolerances(p: &FamilyParams) -> CliResult<()> {
    if !(p.rtol > 0.0 && p.atol > 0.0) {
        return Err(CliError::usage("--rtol and --atol must be positive"));
    }
    Ok(())
}

pub fn resolve_field(args: &FieldArgs, domain: Rect) -> CliResult<Arc<dyn SurfaceField>> {
    if let Some(src) = &args.f {
        return Ok(Arc::new(ExprSurface(parse(src).map_err(Error::from)?)));
    }
    if let (Some(u), Some(v)) = (&args.u, &args.v) {
        let (u, v) = (parse(u).map_err(Error::from)?, parse(v).map_err(Error::from)?);
        return Ok(Arc::new(TranslationSurface(CurvePair::from_exprs(u, v))));
    }
    let Some(tag) = args.family else {
        return Err(CliError::usage("give a surface with --f, --u/--v, or --family"));
    };
    let fam = family_from_args(tag, &args.params, domain.y0)?;
    let pair = match fam {
        TranslationFamily::FlatGeneral(g) => {
            check_tolerances(&args.params)?;
            let v = ode_solve_v_with(&g, (domain.y0, domain.y1), g.y_init, args.params.rtol, args.params.atol)?;
            let u = family_curves(&TranslationFamily::FlatGeneral(g), (domain.y0, domain.y1))?.u;
            CurvePair::new(u, Arc::new(v))
        }
        _ => family_curves(&fam, (domain.y0, domain.y1))?,
    };
    Ok(Arc::new(TranslationSurface(pair)))
}

fn grid_of(cmd: &GridCmd) -> CliResult<Grid> {
    let d = &cmd.domain;
    let rect = Rect::new(d[0], d[1], d[2], d[3])?;
    Ok(Grid::new(rect, cmd.grid[0], cmd.grid[1])?)
}

pub fn curvature_csv(field: &dyn SurfaceField, grid: &Grid) -> CliResult<String> {
    let mut s = String::from("x,y,f,K,H,det_gauss,minimal_residual,flat_residual\n");
    for (x, y) in grid.points() {
        let jet = field.jet(x, y).map_err(at_point(x, y))?;
        let c = graph::curvature_sample(&jet, x, y);
        let row = [c.x, c.y, c.f, c.k, c.h, c.det_gauss, c.minimal_residual, c.flat_residual];
        finite_row(&row, x, y)?;
        push_row(&mut s, &row);
    }
    Ok(s)
}

pub fn gaussmap_csv(field: &dyn SurfaceField, grid: &Grid) -> CliResult<String> {
    let mut s = String::from("x,y,phi_u,phi_v,det\n");
    for (x, y) in grid.points() {
        let jet = field.jet(x, y).map_err(at_point(x, y))?;
        let g = gauss_map::gauss_map_sample(&jet, x, y);
        let row = [x, y, g.phi.u, g.phi.v, g.det];
        finite_row(&row, x, y)?;
        push_row(&mut s, &row);
    }
    Ok(s)
}

/// Vertices in row-major order, then two counter-clockwise triangles per cell.
pub fn mesh_obj(field: &dyn SurfaceField, grid: &Grid) -> CliResult<String> {
    let mut s = String::new();
    for (x, y) in grid.points() {
        let f = field.value(x, y).map_err(at_point(x, y))?;
        finite_row(&[f], x, y)?;
        writeln!(s, "v {} {} {}", num(x), num(y), num(f)).unwrap();
    }
    let idx = |i: usize, j: usize| j * grid.nx + i + 1;
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            writeln!(s, "f {a} {b} {c}").unwrap();
            writeln!(s, "f {a} {c} {d}").unwrap();
        }
    }
    Ok(s)
}

pub fn solve_ode_csv(cmd: &SolveOdeCmd) -> CliResult<String> {
    let (lo, hi) = (cmd.span[0], cmd.span[1]);
    if cmd.samples < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    check_tolerances(&cmd.params)?;
    let g = general_params(&cmd.params, lo)?;
    let sol = ode_solve_v_with(&g, (lo, hi), g.y_init, cmd.params.rtol, cmd.params.atol)?;
    let mut s = String::from("y,v,vp,vpp\n");
    let n = cmd.samples - 1;
    for k in 0..=n {
        // hit both endpoints exactly
        let y = if k == n { hi } else { lo + (hi - lo) * k as f64 / n as f64 };
        let CurveJet { value, d1, d2, .. } = heisenberg_surfaces::translation::CurveField::jet(&sol, y)?;
        push_row(&mut s, &[y, value, d1, d2]);
    }
    Ok(s)
}

fn finite_row(row: &[f64], x: f64, y: f64) -> CliResult<()> {
    if row.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::runtime(format!("at (x, y) = ({x}, {y}): non-finite value")))
    }
}

fn push_row(s: &mut String, row: &[f64]) {
    let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
    s.push_str(&cells.join(","));
    s.push('\n');
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Returns the human report, the summary file contents and the exit code.
pub fn run_verify(cmd: &VerifyCmd) -> CliResult<(String, String, i32)> {
    let suites = verify::select(&cmd.suite).map_err(|e| CliError::usage(e.to_string()))?;
    let mut report = String::new();
    let mut summary = String::from("name,status,max_error\n");
    let mut all = Vec::new();
    for (suite, results) in verify::run(&suites) {
        writeln!(report, "[{}]", suite.name()).unwrap();
        for r in &results {
            writeln!(report, "  {:<4} {}  ({})", r.status.to_string(), r.name, r.detail).unwrap();
            writeln!(summary, "{},{},{}", csv_field(&r.name), r.status, num(r.metric)).unwrap();
        }
        all.extend(results);
    }
    let failed = all.iter().filter(|r| r.mandatory && r.status != Status::Pass).count();
    let mandatory = all.iter().filter(|r| r.mandatory).count();
    writeln!(report, "{} of {} mandatory checks passed", mandatory - failed, mandatory).unwrap();
    let code = if verify::all_mandatory_pass(&all) { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((report, summary, code))
}

fn emit(out: &Option<PathBuf>, body: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, body).map_err(|e| CliError::runtime(format!("writing {}: {e}", p.display()))),
        None => io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::runtime(format!("writing output: {e}"))),
    }
}

/// Execute a parsed command line; the returned code is the process status.
pub fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Curvature(cmd) => grid_command(&cmd, curvature_csv),
        Command::Gaussmap(cmd) => grid_command(&cmd, gaussmap_csv),
        Command::Mesh(cmd) => grid_command(&cmd, mesh_obj),
        Command::Verify(cmd) => {
            let (report, summary, code) = run_verify(&cmd)?;
            emit(&None, &report)?;
            fs::write(&cmd.summary, summary)
                .map_err(|e| CliError::runtime(format!("writing {}: {e}", cmd.summary.display())))?;
            Ok(code)
        }
        Command::SolveOde(cmd) => {
            let body = solve_ode_csv(&cmd)?;
            emit(&cmd.out, &body)?;
            Ok(EXIT_OK)
        }
    }
}

fn grid_command(cmd: &GridCmd, render: fn(&dyn SurfaceField, &Grid) -> CliResult<String>) -> CliResult<i32> {
    let grid = grid_of(cmd)?;
    let field = resolve_field(&cmd.field, grid.rect)?;
    let body = render(field.as_ref(), &grid)?;
    emit(&cmd.out, &body)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Grid {
        Grid::new(Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(), n, n).unwrap()
    }

    fn expr_field(src: &str) -> ExprSurface {
        ExprSurface(parse(src).unwrap())
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, -0.75, 1.0 / 3.0, 1e-300, f64::MAX] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(num(-0.0), num(0.0));
    }

    #[test]
    fn curvature_rows() {
        let s = curvature_csv(&expr_field("0"), &grid(3)).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 10);
        let centre: Vec<f64> = lines[5].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!((centre[0], centre[1], centre[3], centre[4]), (0.0, 0.0, -0.75, 0.0));
    }

    #[test]
    fn mesh_counts_and_orientation() {
        let s = mesh_obj(&expr_field("x*y/2"), &grid(3)).unwrap();
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 9);
        assert_eq!(s.lines().filter(|l| l.starts_with("f ")).count(), 8);
        assert!(s.lines().any(|l| l == format!("v {} {} {}", num(1.0), num(1.0), num(0.5))));
        assert!(s.lines().all(|l| !l.ends_with(' ')));
        let s = mesh_obj(&expr_field("0"), &grid(2)).unwrap();
        assert_eq!(s.lines().filter(|l| l.starts_with("f ")).collect::<Vec<_>>(), ["f 1 2 4", "f 1 4 3"]);
    }

    #[test]
    fn gaussmap_rows() {
        let g = Grid::new(Rect::new(0.0, 2.0, -1.0, 1.0).unwrap(), 3, 3).unwrap();
        let s = gaussmap_csv(&expr_field("0"), &g).unwrap();
        let row = format!("{},{},{},{},{}", num(2.0), num(0.0), num(0.0), num(1.0), num(0.25));
        assert!(s.lines().any(|l| l == row), "{s}");
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::InvalidParameter("x".into())).code, EXIT_USAGE);
        assert_eq!(CliError::from(Error::Domain("x".into())).code, EXIT_RUNTIME);
        let e = curvature_csv(&expr_field("ln(x)"), &grid(3)).unwrap_err();
        assert_eq!(e.code, EXIT_RUNTIME);
        assert!(e.message.contains("(-1, -1)"), "{}", e.message);
    }

    #[test]
    fn summary_names_are_quoted() {
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
