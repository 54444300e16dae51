//! Two-step calibration, its closed-form oracle and lattice-rotation checks.

use std::collections::HashMap;

use nalgebra::{DVector, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::{assemble_with, effective_stiffness, AssemblyError, Metric};
use crate::elasticity::{
    cauchy_project, cauchy_project_voigt, cauchy_residual, is_symmetry_transform, relative_error, tensor_distance,
    ElasticityError, OrthogonalTransform, VoigtReussBounds, VoigtStiffness,
};
use crate::lattice::{
    build_neighborhood, transform_neighborhood, InfluenceFunction, InfluenceKind, LatticeError, Neighborhood, Shape,
    ShapeKind,
};
use crate::solver::{constrained_min_norm, LowerBound, MicromoduliSolution, SolverError, SolverOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Elasticity(#[from] ElasticityError),
    #[error("{0}")]
    Infeasible(Box<CalibrationFailure>),
    #[error(transparent)]
    Solver(SolverError),
}

/// Diagnostics of a calibration whose bound constraints cannot be met.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFailure {
    pub material_name: String,
    pub settings: CalibrationSettings,
    pub bond_count: usize,
    pub rank: usize,
    pub violation: f64,
}

impl std::fmt::Display for CalibrationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: no micromoduli above the lower bound reproduce the least-squares stiffness on a {} \
             ({} bonds, rank {}, relative violation {:.3e})",
            self.material_name, self.settings.shape, self.bond_count, self.rank, self.violation
        )
    }
}

/// Echo of every input that determines a calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSettings {
    pub shape: Shape,
    pub spacing: f64,
    pub influence: InfluenceFunction,
    pub lower_bound: LowerBound,
    pub metric: Metric,
    #[serde(default)]
    pub cauchy_projected_input: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub converged: bool,
    pub iterations: usize,
    pub bond_count: usize,
    pub rank: usize,
    pub residual_norm: f64,
    pub solution_norm: f64,
    pub active_set_size: usize,
    pub equality_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicromoduliSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnisotropySummary {
    pub universal_index: f64,
    pub bounds: VoigtReussBounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub material_name: String,
    pub settings: CalibrationSettings,
    pub reference: VoigtStiffness,
    pub effective: VoigtStiffness,
    pub relative_error: f64,
    /// `None` when the reference stiffness is singular.
    pub anisotropy_ref: Option<AnisotropySummary>,
    pub cauchy_residual_ref: f64,
    pub cauchy_residual_effective: f64,
    pub solver: SolverDiagnostics,
    pub micromoduli_summary: MicromoduliSummary,
    /// Full solution; not serialized (the micromoduli CSV carries it).
    #[serde(skip)]
    pub micromoduli: Option<MicromoduliSolution>,
}

impl CalibrationReport {
    pub fn anisotropy_index_ref(&self) -> Option<f64> {
        self.anisotropy_ref.as_ref().map(|a| a.universal_index)
    }

    /// Recomputes the relative error from the stored matrices.
    pub fn recomputed_error(&self) -> Result<f64, ElasticityError> {
        relative_error(
            &self.reference,
            &self.effective,
            self.settings.metric == Metric::Weighted,
        )
    }

    pub fn micromoduli(&self) -> Option<&DVector<f64>> {
        self.micromoduli.as_ref().map(|s| &s.c)
    }
}

fn summarize(c: &DVector<f64>) -> MicromoduliSummary {
    MicromoduliSummary {
        count: c.len(),
        min: c.min(),
        max: c.max(),
        mean: c.mean(),
    }
}

pub fn calibrate(
    reference: &VoigtStiffness,
    n: &Neighborhood,
    f: &InfluenceFunction,
    opts: &SolverOptions,
) -> Result<CalibrationReport, CalibrationError> {
    calibrate_with_metric(reference, n, f, opts, Metric::Weighted)
}

pub fn calibrate_with_metric(
    reference: &VoigtStiffness,
    n: &Neighborhood,
    f: &InfluenceFunction,
    opts: &SolverOptions,
    metric: Metric,
) -> Result<CalibrationReport, CalibrationError> {
    let material_name = reference.name().unwrap_or("unnamed").to_string();
    let settings = CalibrationSettings {
        shape: *n.shape(),
        spacing: n.spacing(),
        influence: *f,
        lower_bound: opts.lower_bound.clone(),
        metric,
        cauchy_projected_input: false,
    };
    let sys = assemble_with(n, f, reference, metric)?;
    let solution = match constrained_min_norm(&sys, opts) {
        Ok(s) => s,
        Err(SolverError::Infeasible {
            bond_count,
            rank,
            violation,
        }) => {
            return Err(CalibrationError::Infeasible(Box::new(CalibrationFailure {
                material_name,
                settings,
                bond_count,
                rank,
                violation,
            })))
        }
        Err(e) => return Err(CalibrationError::Solver(e)),
    };
    let effective = effective_stiffness(&sys, &solution.c)?.with_name(material_name.clone());
    let relative_error = relative_error(reference, &effective, metric == Metric::Weighted)?;
    let anisotropy_ref = VoigtReussBounds::of(reference).ok().map(|bounds| AnisotropySummary {
        universal_index: bounds.universal_anisotropy_index(),
        bounds,
    });
    Ok(CalibrationReport {
        material_name,
        settings,
        reference: reference.clone(),
        relative_error,
        anisotropy_ref,
        cauchy_residual_ref: cauchy_residual(&reference.to_full()),
        cauchy_residual_effective: cauchy_residual(&effective.to_full()),
        effective,
        solver: SolverDiagnostics {
            converged: solution.converged,
            iterations: solution.iterations,
            bond_count: sys.bond_count(),
            rank: solution.rank,
            residual_norm: solution.residual_norm,
            solution_norm: solution.solution_norm,
            active_set_size: solution.active_set_size,
            equality_residual: solution.equality_residual,
        },
        micromoduli_summary: summarize(&solution.c),
        micromoduli: Some(solution),
    })
}

/// The effective stiffness a converged calibration is expected to reach: the
/// nearest fully symmetric tensor.
pub fn projection_oracle(reference: &VoigtStiffness) -> VoigtStiffness {
    cauchy_project_voigt(reference)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationVerification {
    /// Relative Frobenius distance of the two effective stiffness tensors.
    pub effective_match: f64,
    /// `max_k |c̃_k − c_k| / max |c|` pairing bond `k` with its image `Qξ_k`.
    pub micromoduli_match: f64,
    /// Same comparison made by position: the rotated bond at `Qξ_k` against the
    /// original bond found at that point. `None` when `Q` does not map the
    /// lattice point set onto itself.
    pub positional_match: Option<f64>,
    pub in_symmetry_group: bool,
    pub error_original: f64,
    pub error_rotated: f64,
}

/// Tolerance for matching a rotated bond to an original grid point.
pub const POSITION_MATCH_TOLERANCE: f64 = 1e-6;

/// Tolerance used to decide membership of the symmetry group.
pub const SYMMETRY_GROUP_TOLERANCE: f64 = 1e-6;

fn grid_key(x: &Vector3<f64>, spacing: f64) -> Option<[i64; 3]> {
    let mut key = [0i64; 3];
    for i in 0..3 {
        let u = x[i] / spacing;
        let r = u.round();
        if (u - r).abs() > POSITION_MATCH_TOLERANCE {
            return None;
        }
        key[i] = r as i64;
    }
    Some(key)
}

/// For every bond of `moved`, the index of the bond of `original` at the same
/// position, if the two point sets coincide.
pub fn positional_correspondence(original: &Neighborhood, moved: &Neighborhood) -> Option<Vec<usize>> {
    if original.len() != moved.len() {
        return None;
    }
    let spacing = original.spacing();
    let mut index = HashMap::with_capacity(original.len());
    for (j, b) in original.bonds().iter().enumerate() {
        index.insert(grid_key(&b.xi, spacing)?, j);
    }
    let mut used = vec![false; original.len()];
    let mut map = Vec::with_capacity(moved.len());
    for b in moved.bonds() {
        let j = *index.get(&grid_key(&b.xi, spacing)?)?;
        if used[j] || (original.bonds()[j].xi - b.xi).amax() > POSITION_MATCH_TOLERANCE * spacing {
            return None;
        }
        used[j] = true;
        map.push(j);
    }
    Some(map)
}

pub fn verify_rotation(
    reference: &VoigtStiffness,
    n: &Neighborhood,
    f: &InfluenceFunction,
    q: &OrthogonalTransform,
    opts: &SolverOptions,
) -> Result<RotationVerification, CalibrationError> {
    let moved = transform_neighborhood(n, q);
    let base = calibrate(reference, n, f, opts)?;
    let rotated = calibrate(reference, &moved, f, opts)?;

    let e0 = base.effective.to_full();
    let e1 = rotated.effective.to_full();
    let effective_match = tensor_distance(&e1, &e0, &e0);

    let c0 = base.micromoduli().expect("calibrate returns the solution");
    let c1 = rotated.micromoduli().expect("calibrate returns the solution");
    let scale = c0.amax().max(f64::MIN_POSITIVE);
    let micromoduli_match = (c1 - c0).amax() / scale;
    let positional_match = positional_correspondence(n, &moved).map(|map| {
        map.iter()
            .enumerate()
            .map(|(k, &j)| (c1[k] - c0[j]).abs())
            .fold(0.0, f64::max)
            / scale
    });

    let in_symmetry_group = is_symmetry_transform(&cauchy_project(&reference.to_full()), q, SYMMETRY_GROUP_TOLERANCE);
    Ok(RotationVerification {
        effective_match,
        micromoduli_match,
        positional_match,
        in_symmetry_group,
        error_original: base.relative_error,
        error_rotated: rotated.relative_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub horizon: f64,
    pub outcome: Result<CalibrationReport, CalibrationError>,
}

/// One calibration per horizon; infeasible horizons are recorded and the sweep
/// continues.
pub fn horizon_sweep(
    reference: &VoigtStiffness,
    shape: ShapeKind,
    horizons: &[f64],
    influence: InfluenceKind,
    spacing: f64,
    opts: &SolverOptions,
) -> Vec<SweepEntry> {
    horizons
        .iter()
        .map(|&horizon| {
            let outcome = build_neighborhood(shape.at_horizon(horizon), spacing)
                .map_err(CalibrationError::from)
                .and_then(|n| {
                    let f = InfluenceFunction::for_neighborhood(influence, &n)?;
                    calibrate(reference, &n, &f, opts)
                });
            SweepEntry { horizon, outcome }
        })
        .collect()
}
