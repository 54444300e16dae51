//! Linear map from bond micromoduli to effective Voigt stiffness.
//!
//! Bond `N` with vector `ξ` contributes `½ ω(|ξ|) ζ_α ζ_β ΔV / |ξ|³` per unit
//! micromodulus to component `(α, β)`, where
//! `ζ = (ξ₁ξ₁, ξ₂ξ₂, ξ₃ξ₃, ξ₂ξ₃, ξ₃ξ₁, ξ₁ξ₂)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elasticity::{StiffnessVector21, VoigtStiffness, COMPONENT_ORDER, COMPONENT_WEIGHTS};
use crate::lattice::{InfluenceFunction, LatticeError, Neighborhood};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("neighborhood has no bonds")]
    EmptyNeighborhood,
    #[error("bond {index}: {source}")]
    Bond {
        index: usize,
        #[source]
        source: LatticeError,
    },
    #[error("micromoduli vector has length {got}, system has {expected} bonds")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
}

/// Norm used to measure the stiffness residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Full-tensor Frobenius norm (21 components with multiplicity weights).
    #[default]
    Weighted,
    /// Plain Euclidean norm of the 21 components.
    Plain,
}

impl Metric {
    pub fn row_weights(self) -> [f64; 21] {
        match self {
            Metric::Weighted => COMPONENT_WEIGHTS,
            Metric::Plain => [1.0; 21],
        }
    }
}

/// Assembled least-squares system `X c ≈ b`.
#[derive(Debug, Clone)]
pub struct CoefficientSystem {
    raw: DMatrix<f64>,
    x: DMatrix<f64>,
    b: DVector<f64>,
    target: StiffnessVector21,
    metric: Metric,
}

/// One column of the unweighted coefficient matrix.
pub fn bond_column(xi: &nalgebra::Vector3<f64>, length: f64, volume: f64, influence: f64) -> [f64; 21] {
    let zeta = [
        xi[0] * xi[0],
        xi[1] * xi[1],
        xi[2] * xi[2],
        xi[1] * xi[2],
        xi[2] * xi[0],
        xi[0] * xi[1],
    ];
    let scale = 0.5 * influence * volume / (length * length * length);
    let mut col = [0.0; 21];
    for (n, &(a, b)) in COMPONENT_ORDER.iter().enumerate() {
        col[n] = scale * zeta[a] * zeta[b];
    }
    col
}

pub fn assemble(
    n: &Neighborhood,
    f: &InfluenceFunction,
    reference: &VoigtStiffness,
) -> Result<CoefficientSystem, AssemblyError> {
    assemble_with(n, f, reference, Metric::Weighted)
}

pub fn assemble_with(
    n: &Neighborhood,
    f: &InfluenceFunction,
    reference: &VoigtStiffness,
    metric: Metric,
) -> Result<CoefficientSystem, AssemblyError> {
    if n.is_empty() {
        return Err(AssemblyError::EmptyNeighborhood);
    }
    let m = n.len();
    let mut raw = DMatrix::zeros(21, m);
    for (k, bond) in n.bonds().iter().enumerate() {
        let w = f
            .value(bond.length)
            .map_err(|source| AssemblyError::Bond { index: k, source })?;
        let col = bond_column(&bond.xi, bond.length, bond.volume, w);
        raw.column_mut(k).copy_from_slice(&col);
    }
    let target = reference.to_vector21();
    let scale: Vec<f64> = metric.row_weights().iter().map(|w| w.sqrt()).collect();
    let mut x = raw.clone();
    for (r, s) in scale.iter().enumerate() {
        x.row_mut(r).scale_mut(*s);
    }
    let b = DVector::from_iterator(21, target.components.iter().zip(&scale).map(|(t, s)| t * s));
    Ok(CoefficientSystem {
        raw,
        x,
        b,
        target,
        metric,
    })
}

impl CoefficientSystem {
    /// Builds a system directly from an unweighted 21×M matrix.
    pub fn from_parts(raw: DMatrix<f64>, target: StiffnessVector21, metric: Metric) -> Self {
        assert_eq!(raw.nrows(), 21, "coefficient matrix must have 21 rows");
        let scale: Vec<f64> = metric.row_weights().iter().map(|w| w.sqrt()).collect();
        let mut x = raw.clone();
        for (r, s) in scale.iter().enumerate() {
            x.row_mut(r).scale_mut(*s);
        }
        let b = DVector::from_iterator(21, target.components.iter().zip(&scale).map(|(t, s)| t * s));
        CoefficientSystem {
            raw,
            x,
            b,
            target,
            metric,
        }
    }

    /// Row-scaled matrix seen by the solver.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// Row-scaled right-hand side.
    pub fn rhs(&self) -> &DVector<f64> {
        &self.b
    }

    /// Coefficient matrix without metric scaling.
    pub fn unweighted(&self) -> &DMatrix<f64> {
        &self.raw
    }

    pub fn target(&self) -> &StiffnessVector21 {
        &self.target
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn row_weights(&self) -> [f64; 21] {
        self.metric.row_weights()
    }

    pub fn bond_count(&self) -> usize {
        self.x.ncols()
    }

    /// Singular values of the scaled matrix, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .x
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Numerical rank: singular values above `rel_tol · σ_max`, with the
    /// default `rel_tol = ε · max(21, M)`.
    pub fn rank(&self, rel_tol: Option<f64>) -> usize {
        let tol = rel_tol.unwrap_or_else(|| default_rank_tolerance(self.bond_count()));
        let s = self.singular_values();
        let top = s.first().copied().unwrap_or(0.0);
        s.iter().filter(|&&v| v > tol * top).count()
    }
}

pub fn default_rank_tolerance(bond_count: usize) -> f64 {
    f64::EPSILON * bond_count.max(21) as f64
}

/// Effective stiffness `X c`, without metric scaling.
pub fn effective_stiffness(sys: &CoefficientSystem, c: &DVector<f64>) -> Result<VoigtStiffness, AssemblyError> {
    if c.len() != sys.bond_count() {
        return Err(AssemblyError::LengthMismatch {
            expected: sys.bond_count(),
            got: c.len(),
        });
    }
    let v = &sys.raw * c;
    let mut comps = [0.0; 21];
    comps.copy_from_slice(v.as_slice());
    Ok(VoigtStiffness::from_components(&comps).expect("components are finite and symmetric by construction"))
}

/// Closed-form micromodulus of a continuous isotropic sphere, `18K/(πδ⁴)`.
pub fn analytical_isotropic_micromodulus(bulk_modulus: f64, horizon: f64) -> Result<f64, AssemblyError> {
    if !(bulk_modulus.is_finite() && bulk_modulus > 0.0) {
        return Err(AssemblyError::NonPositive("bulk modulus"));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(AssemblyError::NonPositive("horizon"));
    }
    Ok(18.0 * bulk_modulus / (PI * horizon.powi(4)))
}
