//! File formats: material JSON, micromoduli CSV, report JSON, VTK point
//! clouds, and the textual angle / transform specifications used by the CLI.

use std::io::{Read, Write};
use std::str::FromStr;

use nalgebra::{DVector, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calibration::CalibrationReport;
use crate::elasticity::{reflection_transform, ElasticityError, OrthogonalTransform, VoigtStiffness};
use crate::lattice::{composed_rotation, Neighborhood};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("unsupported units `{0}`; expected GPa")]
    Units(String),
    #[error(transparent)]
    Stiffness(#[from] ElasticityError),
    #[error("{0}")]
    Invalid(String),
}

/// Asymmetry accepted (and averaged away) in material files.
pub const MATERIAL_SYMMETRY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    name: String,
    units: String,
    voigt: [[f64; 6]; 6],
}

pub fn parse_material_json(text: &str) -> Result<VoigtStiffness, FormatError> {
    let file: MaterialFile = serde_json::from_str(text)?;
    if file.units.trim() != "GPa" {
        return Err(FormatError::Units(file.units));
    }
    Ok(VoigtStiffness::with_tolerance(file.voigt, MATERIAL_SYMMETRY_TOLERANCE)?.with_name(file.name))
}

pub fn material_to_json(v: &VoigtStiffness) -> String {
    let file = MaterialFile {
        name: v.name().unwrap_or("unnamed").to_string(),
        units: "GPa".to_string(),
        voigt: v.to_array(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// One row of the micromoduli CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicromodulusRecord {
    pub bond_id: usize,
    pub xi_x: f64,
    pub xi_y: f64,
    pub xi_z: f64,
    pub length: f64,
    pub micromodulus: f64,
}

impl MicromodulusRecord {
    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.xi_x, self.xi_y, self.xi_z)
    }
}

pub fn micromoduli_records(n: &Neighborhood, c: &DVector<f64>) -> Result<Vec<MicromodulusRecord>, FormatError> {
    if n.len() != c.len() {
        return Err(FormatError::Invalid(format!(
            "{} micromoduli for {} bonds",
            c.len(),
            n.len()
        )));
    }
    Ok(n.bonds()
        .iter()
        .zip(c.iter())
        .enumerate()
        .map(|(k, (b, &c))| MicromodulusRecord {
            bond_id: k,
            xi_x: b.xi.x,
            xi_y: b.xi.y,
            xi_z: b.xi.z,
            length: b.length,
            micromodulus: c,
        })
        .collect())
}

pub fn write_micromoduli_csv<W: Write>(w: W, records: &[MicromodulusRecord]) -> Result<(), FormatError> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_micromoduli_csv<R: Read>(r: R) -> Result<Vec<MicromodulusRecord>, FormatError> {
    let mut reader = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in reader.deserialize() {
        let rec: MicromodulusRecord = row?;
        let finite = [rec.xi_x, rec.xi_y, rec.xi_z, rec.length, rec.micromodulus]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(FormatError::Invalid(format!("bond {}: non-finite value", rec.bond_id)));
        }
        out.push(rec);
    }
    Ok(out)
}

/// Legacy ASCII VTK polydata: one vertex per bond endpoint, micromodulus as
/// point scalar.
pub fn write_vtk<W: Write>(mut w: W, records: &[MicromodulusRecord]) -> Result<(), FormatError> {
    if records.is_empty() {
        return Err(FormatError::Invalid("no micromoduli to export".into()));
    }
    let n = records.len();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "bond micromoduli")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET POLYDATA")?;
    writeln!(w, "POINTS {n} double")?;
    for r in records {
        writeln!(w, "{:?} {:?} {:?}", r.xi_x, r.xi_y, r.xi_z)?;
    }
    writeln!(w, "VERTICES {n} {}", 2 * n)?;
    for k in 0..n {
        writeln!(w, "1 {k}")?;
    }
    writeln!(w, "POINT_DATA {n}")?;
    writeln!(w, "SCALARS micromodulus double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for r in records {
        writeln!(w, "{:?}", r.micromodulus)?;
    }
    Ok(())
}

/// Parses a report and checks that its stored error matches the stored matrices.
pub fn parse_report_json(text: &str) -> Result<CalibrationReport, FormatError> {
    let report: CalibrationReport = serde_json::from_str(text)?;
    let recomputed = report.recomputed_error()?;
    let stored = report.relative_error;
    if !stored.is_finite() || (recomputed - stored).abs() > 1e-12 * stored.abs().max(1.0) {
        return Err(FormatError::Invalid(format!(
            "stored relative error {stored} disagrees with recomputed {recomputed}"
        )));
    }
    Ok(report)
}

/// Angle with a mandatory unit suffix: `60deg`, `-30 deg`, `1.047rad`.
pub fn parse_angle(text: &str) -> Result<f64, FormatError> {
    let t = text.trim();
    let (number, to_radians) = if let Some(v) = t.strip_suffix("deg") {
        (v, std::f64::consts::PI / 180.0)
    } else if let Some(v) = t.strip_suffix("rad") {
        (v, 1.0)
    } else {
        return Err(FormatError::Invalid(format!(
            "angle `{text}` needs a unit suffix (deg or rad)"
        )));
    };
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| FormatError::Invalid(format!("bad angle `{text}`")))?;
    if !value.is_finite() {
        return Err(FormatError::Invalid(format!("bad angle `{text}`")));
    }
    Ok(value * to_radians)
}

/// Plane normal: `x`, `y`, `z`, `e1`, `e2`, `e3`, or three comma-separated
/// components (normalized here).
pub fn parse_normal(text: &str) -> Result<Vector3<f64>, FormatError> {
    let t = text.trim().to_ascii_lowercase();
    let axis = match t.as_str() {
        "x" | "e1" => Some(Vector3::x()),
        "y" | "e2" => Some(Vector3::y()),
        "z" | "e3" => Some(Vector3::z()),
        _ => None,
    };
    if let Some(a) = axis {
        return Ok(a);
    }
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(FormatError::Invalid(format!("bad plane normal `{text}`")));
    }
    let mut v = Vector3::<f64>::zeros();
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| FormatError::Invalid(format!("bad plane normal `{text}`")))?;
    }
    // Rescale first so that tiny or huge components neither underflow nor
    // overflow the norm.
    let largest = v.amax();
    if !(largest.is_finite() && largest > 0.0) {
        return Err(FormatError::Invalid(format!("plane normal `{text}` has no direction")));
    }
    v /= largest;
    Ok(v / v.norm())
}

/// A lattice transformation requested by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformSpec {
    /// `R_x R_y R_z`, equal angle about each axis.
    EquiAngle(f64),
    AboutZ(f64),
    Reflect(Vector3<f64>),
}

impl TransformSpec {
    pub fn to_transform(&self) -> Result<OrthogonalTransform, FormatError> {
        Ok(match *self {
            TransformSpec::EquiAngle(t) => composed_rotation(t),
            TransformSpec::AboutZ(t) => OrthogonalTransform::rotation_z(t),
            TransformSpec::Reflect(n) => reflection_transform(n)?,
        })
    }
}

impl FromStr for TransformSpec {
    type Err = FormatError;

    /// `rotation:<angle>`, `rotate-z:<angle>` or `reflect:<normal>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| FormatError::Invalid(format!("transform `{s}` must look like kind:value")))?;
        match kind.trim() {
            "rotation" => Ok(TransformSpec::EquiAngle(parse_angle(value)?)),
            "rotate-z" => Ok(TransformSpec::AboutZ(parse_angle(value)?)),
            "reflect" => Ok(TransformSpec::Reflect(parse_normal(value)?)),
            other => Err(FormatError::Invalid(format!("unknown transform `{other}`"))),
        }
    }
}
