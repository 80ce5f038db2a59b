use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use setops::geometry::{sphere_grid, DirectionGrid};
use setops::harness::{
    fit_polynomial_volume, grid_points, make_op, run_profile_suite, BinaryOp, CheckConfig, OpParams, SetValue,
};
use setops::io::{
    body_from_json, body_to_json, body_to_off, mset_from_json, parse_json, samples_csv, star_from_json, star_to_json,
    to_canonical_json, Approximation,
};
use setops::operations::MSet;
use setops::star::radial_on_grid;
use setops::convex::support_on_grid;
use setops::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "setops", version, about = "Binary operations on convex bodies and star sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operation to two bodies read from JSON.
    Compute(ComputeArgs),
    /// Run a property suite and compare it with the predicted profile.
    Verify(VerifyArgs),
    /// Fit a polynomial in (r, s) to V(rK * sL).
    FitVolume(FitArgs),
    /// Write a body as OFF or its support/radial samples as CSV.
    Export(ExportArgs),
}

#[derive(Args)]
struct OpArgs {
    /// Operation: minkowski, lp, lp_extended, m_add, blaschke, polar_lp, radial, ex1, ex2, ex3, ex4, ex5,
    /// ex5_star, ex5555, ex555, introex, not_lp.
    #[arg(long)]
    op: String,
    /// Exponent for lp, lp_extended, polar_lp, radial and not_lp (accepts inf, -inf).
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Symmetral exponent for not_lp (default 1).
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Coefficient set: a JSON file, or one of square, disc, l1_ball.
    #[arg(long)]
    m: Option<String>,
}

#[derive(Args)]
struct GridArgs {
    /// Directions per sampling grid.
    #[arg(long, default_value_t = 10_000)]
    resolution: usize,
    /// Grid and sampling seed; defaults to $SETOPS_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    op: OpArgs,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the result as OFF (bodies in R³ only).
    #[arg(long)]
    off: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Approx::Inner)]
    approx: Approx,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "paper-profile")]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    resolution: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 5e-3)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    op: OpArgs,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Use g + 1 equally spaced values of r and of s in [0, 2].
    #[arg(long, default_value_t = 8)]
    grid: usize,
    /// Polynomial degree in each variable; defaults to the dimension.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    sampling: GridArgs,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Format,
    /// Read the input as a star set (CSV then holds radial values).
    #[arg(long)]
    star: bool,
    #[arg(long, value_enum, default_value_t = Approx::Inner)]
    approx: Approx,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Off,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Approx {
    Inner,
    Outer,
}

impl From<Approx> for Approximation {
    fn from(a: Approx) -> Self {
        match a {
            Approx::Inner => Approximation::Inner,
            Approx::Outer => Approximation::Outer,
        }
    }
}

fn seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SETOPS_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("SETOPS_SEED: not an integer: {s:?}"))),
        Err(_) => Ok(0),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Argument(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn real(s: &str) -> Result<f64> {
    setops::io::json_f64(&Value::String(s.to_string()), "parameter")
        .or_else(|_| s.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}"))))
}

fn mset(spec: &str) -> Result<MSet> {
    match spec {
        "square" => Ok(MSet::Box { m: 2 }),
        "disc" => MSet::lp_ball(2, 2.0),
        "l1_ball" => MSet::lp_ball(2, 1.0),
        path => mset_from_json(&read_json(Path::new(path))?),
    }
}

fn build_op(args: &OpArgs, resolution: usize) -> Result<BinaryOp> {
    let params = OpParams {
        p: args.p.as_deref().map(real).transpose()?,
        q: args.q.as_deref().map(real).transpose()?,
        m: args.m.as_deref().map(mset).transpose()?,
        resolution: Some(resolution),
    };
    make_op(&args.op, &params)
}

fn grid(n: usize, resolution: usize, seed: u64) -> Result<Arc<DirectionGrid>> {
    Ok(Arc::new(sphere_grid(n, resolution, seed)?))
}

fn read_operand(op: &BinaryOp, path: &Path, resolution: usize, seed: u64) -> Result<SetValue> {
    let v = read_json(path)?;
    if op.domain().is_star() {
        Ok(SetValue::Star(star_from_json(&v, |n| grid(n, resolution, seed))?))
    } else {
        Ok(SetValue::Convex(body_from_json(&v)?))
    }
}

fn compute(args: ComputeArgs) -> Result<()> {
    let seed = seed(args.grid.seed)?;
    let res = args.grid.resolution;
    let op = build_op(&args.op, res)?;
    let a = read_operand(&op, &args.a, res, seed)?;
    let b = read_operand(&op, &args.b, res, seed)?;
    let out = op.apply(&a, &b)?;
    let g = grid(out.dim(), res, seed)?;
    let json = match &out {
        SetValue::Convex(k) => body_to_json(k, &g),
        SetValue::Star(s) => star_to_json(s, &g),
    };
    write_out(args.out.as_deref(), &to_canonical_json(&json))?;
    if let Some(path) = &args.off {
        let body = match &out {
            SetValue::Convex(k) => k,
            SetValue::Star(s) => s
                .as_convex()
                .ok_or_else(|| Error::Argument("OFF export needs a convex result".into()))?,
        };
        write_out(Some(path), &body_to_off(body, args.approx.into(), &g)?)?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    if args.suite != "paper-profile" {
        return Err(Error::Argument(format!("unknown suite {:?} (available: paper-profile)", args.suite)));
    }
    let cfg = CheckConfig { samples: args.samples, resolution: args.resolution, seed: seed(args.seed)?, tol: args.tol };
    let result = run_profile_suite(&cfg)?;
    write_out(args.out.as_deref(), &to_canonical_json(&result.to_json()))?;
    let bad = result.mismatches();
    for r in &bad {
        eprintln!("mismatch: {} {} (max violation {:e}, pass={})", r.op, r.property, r.max_violation, r.pass);
    }
    eprintln!("{} checks, {} mismatches", result.rows.len(), bad.len());
    Ok(bad.is_empty())
}

fn fit_volume(args: FitArgs) -> Result<()> {
    let seed = seed(args.sampling.seed)?;
    let res = args.sampling.resolution;
    let op = build_op(&args.op, res)?;
    let a = read_operand(&op, &args.a, res, seed)?;
    let b = read_operand(&op, &args.b, res, seed)?;
    let n = a.dim();
    let pts = grid_points(args.grid);
    let g = grid(n, res, seed)?;
    let fit = fit_polynomial_volume(&op, &a, &b, &pts, &pts, args.degree.unwrap_or(n), &g)?;
    write_out(args.out.as_deref(), &to_canonical_json(&fit.to_json()))
}

fn export(args: ExportArgs) -> Result<()> {
    let seed = seed(args.grid.seed)?;
    let res = args.grid.resolution;
    let v = read_json(&args.input)?;
    let text = if args.star {
        let s = star_from_json(&v, |n| grid(n, res, seed))?;
        let g = match s.as_sampled() {
            Some((g, _)) => g.clone(),
            None => grid(s.dim(), res, seed)?,
        };
        match args.format {
            Format::Csv => samples_csv(&g, &radial_on_grid(&s, &g), "radial"),
            Format::Off => {
                let k = s.as_convex().ok_or_else(|| Error::Argument("OFF export needs a convex body".into()))?;
                body_to_off(k, args.approx.into(), &g)?
            }
        }
    } else {
        let k = body_from_json(&v)?;
        let g = if v.get("repr").and_then(Value::as_str) == Some("support_sampled") {
            // The generating grid, so the samples come back unchanged.
            grid(k.dim(), v["resolution"].as_u64().unwrap_or(0) as usize, v["grid_seed"].as_u64().unwrap_or(0))?
        } else {
            grid(k.dim(), res, seed)?
        };
        match args.format {
            Format::Csv => samples_csv(&g, &support_on_grid(&k, &g), "support"),
            Format::Off => body_to_off(&k, args.approx.into(), &g)?,
        }
    };
    write_out(args.out.as_deref(), &text)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Argument(_) => 2,
        Error::Domain(_) => 3,
        Error::Convergence { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(a) => compute(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::FitVolume(a) => fit_volume(a).map(|_| true),
        Command::Export(a) => export(a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("setops: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
