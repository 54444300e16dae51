use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bondcal::assembly::Metric;
use bondcal::calibration::{calibrate_with_metric, verify_rotation, CalibrationError};
use bondcal::catalog::Material;
use bondcal::elasticity::{cauchy_project_voigt, cauchy_residual, universal_anisotropy_index, VoigtStiffness};
use bondcal::formats::{
    micromoduli_records, parse_angle, parse_material_json, parse_normal, read_micromoduli_csv, write_micromoduli_csv,
    write_vtk, TransformSpec,
};
use bondcal::lattice::{build_neighborhood, InfluenceFunction, InfluenceKind, Neighborhood, ShapeKind};
use bondcal::solver::SolverOptions;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Effective stiffness distance below which a rotated calibration counts as
/// reproducing the original.
const VERIFY_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "bondcal",
    version,
    about = "Calibrate peridynamic bond micromoduli to anisotropic stiffness tensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the built-in material catalog
    Materials {
        #[command(subcommand)]
        action: MaterialsAction,
    },
    /// Solve for the micromoduli of one neighborhood
    Calibrate(CalibrateArgs),
    /// Calibrate on a transformed lattice and compare with the original
    Verify(VerifyArgs),
    /// Convert a micromoduli CSV into a point cloud
    Viz(VizArgs),
}

#[derive(Subcommand)]
enum MaterialsAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct NeighborhoodArgs {
    #[arg(long, default_value = "sphere")]
    shape: ShapeKind,
    #[arg(long, default_value_t = 6.0)]
    horizon: f64,
    #[arg(long, default_value_t = 1.0)]
    spacing: f64,
    /// constant, inverse, hat or power
    #[arg(long, default_value = "inverse")]
    influence: String,
    /// Exponent of the power influence function
    #[arg(long)]
    power_exp: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lower_bound: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Weighted)]
    metric: MetricArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    /// Frobenius norm of the full fourth-order tensor
    Weighted,
    /// Plain norm of the 21 Voigt components
    Plain,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Weighted => Metric::Weighted,
            MetricArg::Plain => Metric::Plain,
        }
    }
}

#[derive(Args)]
struct CalibrateArgs {
    /// Catalog name or path to a material JSON file
    #[arg(long)]
    material: String,
    #[command(flatten)]
    neighborhood: NeighborhoodArgs,
    /// Replace the input by its nearest tensor obeying Cauchy's relations
    #[arg(long)]
    project_cauchy: bool,
    /// Micromoduli CSV output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report JSON output; printed to stdout when omitted
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("transform").required(true).args(["rotation", "rotate_z", "reflect"]))]
struct VerifyArgs {
    #[arg(long)]
    material: String,
    /// Equal rotation about x, y and z, e.g. `30deg`
    #[arg(long, allow_hyphen_values = true)]
    rotation: Option<String>,
    /// Rotation about the z axis, e.g. `60deg`
    #[arg(long, allow_hyphen_values = true)]
    rotate_z: Option<String>,
    /// Reflection across the plane with this normal: x, y, z or `a,b,c`
    #[arg(long, allow_hyphen_values = true)]
    reflect: Option<String>,
    #[command(flatten)]
    neighborhood: NeighborhoodArgs,
}

#[derive(Args)]
struct VizArgs {
    /// Micromoduli CSV written by `calibrate --out`
    #[arg(long)]
    result: PathBuf,
    #[arg(long, value_enum, default_value_t = VizFormat::Vtk)]
    format: VizFormat,
    /// Written to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VizFormat {
    Csv,
    Vtk,
}

enum Failure {
    Usage(String),
    Infeasible,
    Other(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Infeasible => ExitCode::from(3),
            Failure::Other(_) => ExitCode::from(1),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn other(e: impl std::fmt::Display) -> Failure {
    Failure::Other(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Materials { action } => materials(action),
        Command::Calibrate(args) => calibrate_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Viz(args) => viz_cmd(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            match &f {
                Failure::Usage(msg) | Failure::Other(msg) => eprintln!("error: {msg}"),
                Failure::Infeasible => {}
            }
            f.exit_code()
        }
    }
}

fn resolve_material(spec: &str) -> Result<VoigtStiffness, Failure> {
    if let Ok(m) = spec.parse::<Material>() {
        return Ok(m.stiffness());
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(usage(format!("`{spec}` is neither a catalog material nor a file")));
    }
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{spec}: {e}")))?;
    parse_material_json(&text).map_err(|e| usage(format!("{spec}: {e}")))
}

fn neighborhood(args: &NeighborhoodArgs) -> Result<(Neighborhood, InfluenceFunction, SolverOptions), Failure> {
    if !(args.horizon.is_finite() && args.horizon > 0.0) {
        return Err(usage(format!("horizon must be positive, got {}", args.horizon)));
    }
    let n = build_neighborhood(args.shape.at_horizon(args.horizon), args.spacing).map_err(usage)?;
    let kind = InfluenceKind::parse(&args.influence, args.power_exp).map_err(usage)?;
    let f = InfluenceFunction::for_neighborhood(kind, &n).map_err(usage)?;
    if !args.lower_bound.is_finite() {
        return Err(usage(format!("lower bound must be finite, got {}", args.lower_bound)));
    }
    Ok((n, f, SolverOptions::default().with_lower_bound(args.lower_bound)))
}

/// Writes through a temporary file in the destination directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| other(format!("{}: {e}", path.display())))?;
    tmp.write_all(bytes)
        .map_err(|e| other(format!("{}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| other(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => io::stdout().write_all(bytes).map_err(other),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s.into_bytes()
}

fn materials(action: MaterialsAction) -> Result<ExitCode, Failure> {
    match action {
        MaterialsAction::List { json } => {
            let rows: Vec<_> = Material::ALL
                .iter()
                .map(|m| {
                    let a_u = universal_anisotropy_index(&m.stiffness()).expect("catalog matrices are invertible");
                    (m.name(), m.symmetry().label(), a_u)
                })
                .collect();
            if json {
                let list: Vec<_> = rows
                    .iter()
                    .map(|(name, class, a_u)| serde_json::json!({"name": name, "symmetry": class, "anisotropy_index": a_u}))
                    .collect();
                emit(None, &to_json(&list))?;
            } else {
                let mut out = String::new();
                for (name, class, a_u) in rows {
                    out.push_str(&format!("{name:<16} {class:<24} A_U = {a_u:.4}\n"));
                }
                emit(None, out.as_bytes())?;
            }
        }
        MaterialsAction::Show { name, json } => {
            let m: Material = name.parse().map_err(usage)?;
            let c = m.stiffness();
            let a_u = universal_anisotropy_index(&c).expect("catalog matrices are invertible");
            let residual = cauchy_residual(&c.to_full());
            if json {
                let v = serde_json::json!({
                    "name": m.name(),
                    "symmetry": m.symmetry().label(),
                    "units": "GPa",
                    "voigt": c.to_array(),
                    "cauchy_residual": residual,
                    "anisotropy_index": a_u,
                });
                emit(None, &to_json(&v))?;
            } else {
                let mut out = format!("{} ({}), GPa\n", m.name(), m.symmetry().label());
                for row in c.to_array() {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:>9.2}")).collect();
                    out.push_str(&cells.join(""));
                    out.push('\n');
                }
                out.push_str(&format!("cauchy_residual = {residual:.6}\nA_U = {a_u:.4}\n"));
                emit(None, out.as_bytes())?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn calibrate_cmd(args: CalibrateArgs) -> Result<ExitCode, Failure> {
    let mut reference = resolve_material(&args.material)?;
    if args.project_cauchy {
        reference = cauchy_project_voigt(&reference);
    }
    let (n, f, opts) = neighborhood(&args.neighborhood)?;
    match calibrate_with_metric(&reference, &n, &f, &opts, args.neighborhood.metric.into()) {
        Ok(mut report) => {
            report.settings.cauchy_projected_input = args.project_cauchy;
            if let Some(out) = &args.out {
                let c = report.micromoduli().expect("calibrate returns the solution");
                let records = micromoduli_records(&n, c).map_err(other)?;
                let mut buf = Vec::new();
                write_micromoduli_csv(&mut buf, &records).map_err(other)?;
                write_atomic(out, &buf)?;
            }
            emit(args.report.as_deref(), &to_json(&report))?;
            if args.report.is_some() {
                println!(
                    "{}: relative error {:.4}% over {} bonds ({} at the lower bound)",
                    report.material_name,
                    100.0 * report.relative_error,
                    report.solver.bond_count,
                    report.solver.active_set_size
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(CalibrationError::Infeasible(mut failure)) => {
            failure.settings.cauchy_projected_input = args.project_cauchy;
            eprintln!("{failure}");
            emit(args.report.as_deref(), &to_json(&failure))?;
            Err(Failure::Infeasible)
        }
        Err(CalibrationError::Solver(e)) => Err(usage(e)),
        Err(e) => Err(other(e)),
    }
}

fn verify_cmd(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let reference = resolve_material(&args.material)?;
    let spec = if let Some(a) = &args.rotation {
        TransformSpec::EquiAngle(parse_angle(a).map_err(usage)?)
    } else if let Some(a) = &args.rotate_z {
        TransformSpec::AboutZ(parse_angle(a).map_err(usage)?)
    } else if let Some(n) = &args.reflect {
        TransformSpec::Reflect(parse_normal(n).map_err(usage)?)
    } else {
        unreachable!("clap requires one transform")
    };
    let q = spec.to_transform().map_err(usage)?;
    let (n, f, opts) = neighborhood(&args.neighborhood)?;
    match verify_rotation(&reference, &n, &f, &q, &opts) {
        Ok(v) => {
            emit(None, &to_json(&v))?;
            Ok(if v.effective_match <= VERIFY_TOLERANCE {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Err(CalibrationError::Infeasible(failure)) => {
            eprintln!("{failure}");
            emit(None, &to_json(&failure))?;
            Err(Failure::Infeasible)
        }
        Err(e) => Err(other(e)),
    }
}

fn viz_cmd(args: VizArgs) -> Result<ExitCode, Failure> {
    let file = fs::File::open(&args.result).map_err(|e| usage(format!("{}: {e}", args.result.display())))?;
    let records = read_micromoduli_csv(io::BufReader::new(file)).map_err(usage)?;
    if records.is_empty() {
        return Err(usage(format!("{} holds no bonds", args.result.display())));
    }
    let mut buf = Vec::new();
    match args.format {
        VizFormat::Csv => write_micromoduli_csv(&mut buf, &records).map_err(other)?,
        VizFormat::Vtk => write_vtk(&mut buf, &records).map_err(other)?,
    }
    emit(args.out.as_deref(), &buf)?;
    Ok(ExitCode::SUCCESS)
}
