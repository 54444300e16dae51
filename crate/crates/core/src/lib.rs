//! Calibration of bond-based peridynamic micromoduli against anisotropic
//! linear-elastic stiffness tensors.
//!
//! A neighborhood of bonds on a cubic grid ([`lattice`]) maps per-bond
//! micromoduli linearly to an effective stiffness ([`assembly`]). The
//! micromoduli are chosen as the least-norm non-negative vector among the
//! least-squares fits ([`solver`]); [`calibration`] ties the steps together.
//!
//! ```
//! use bondcal::prelude::*;
//!
//! let reference = Material::Si.stiffness();
//! let n = build_neighborhood(Shape::Sphere { radius: 3.0 }, 1.0).unwrap();
//! let f = InfluenceFunction::for_neighborhood(InfluenceKind::Inverse, &n).unwrap();
//! let report = calibrate(&reference, &n, &f, &SolverOptions::default()).unwrap();
//! // Bond-based models can only reach tensors obeying Cauchy's relations.
//! let oracle = projection_oracle(&reference);
//! assert!(report.effective.max_abs_diff(&oracle) < 1e-8);
//! ```

pub mod assembly;
pub mod calibration;
pub mod catalog;
pub mod elasticity;
pub mod formats;
pub mod lattice;
pub mod solver;

pub mod prelude {
    pub use crate::assembly::{assemble, assemble_with, effective_stiffness, CoefficientSystem, Metric};
    pub use crate::calibration::{
        calibrate, horizon_sweep, projection_oracle, verify_rotation, CalibrationError, CalibrationReport,
        RotationVerification,
    };
    pub use crate::catalog::Material;
    pub use crate::elasticity::{
        cauchy_project, cauchy_project_voigt, cauchy_residual, relative_error, rotate_stiffness,
        universal_anisotropy_index, FullStiffness, OrthogonalTransform, VoigtStiffness,
    };
    pub use crate::lattice::{
        build_neighborhood, composed_rotation, transform_neighborhood, InfluenceFunction, InfluenceKind, Neighborhood,
        Shape, ShapeKind,
    };
    pub use crate::solver::{constrained_min_norm, min_norm_least_squares, LowerBound, SolverError, SolverOptions};
}
