//! Discrete peridynamic neighborhoods on a regular cubic grid.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elasticity::OrthogonalTransform;

/// Relative slack applied to shape-membership and horizon tests so that grid
/// points lying exactly on the boundary are kept.
pub const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("horizon too small: no grid point other than the center lies inside the {0}")]
    HorizonTooSmall(Shape),
    #[error("shape parameter must be positive and finite, got {0}")]
    BadShapeParameter(f64),
    #[error("lattice spacing must be positive and finite, got {0}")]
    BadSpacing(f64),
    #[error("bond length {length} outside the influence domain (0, {horizon}]")]
    OutsideHorizon { length: f64, horizon: f64 },
    #[error("influence exponent must be positive and finite, got {0}")]
    BadExponent(f64),
    #[error("unknown {what} `{value}`")]
    Unknown { what: &'static str, value: String },
}

/// A single bond from the center particle to a neighbor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub xi: Vector3<f64>,
    pub length: f64,
    pub volume: f64,
}

/// Region of the grid that forms the neighborhood, centered on the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Sphere { radius: f64 },
    Cube { half_edge: f64 },
    Cuboid { half_edges: [f64; 3] },
    Ellipsoid { semi_axes: [f64; 3] },
}

impl Shape {
    fn parameters(&self) -> [f64; 3] {
        match *self {
            Shape::Sphere { radius } => [radius; 3],
            Shape::Cube { half_edge } => [half_edge; 3],
            Shape::Cuboid { half_edges } => half_edges,
            Shape::Ellipsoid { semi_axes } => semi_axes,
        }
    }

    /// Per-axis half extent of the bounding box.
    pub fn extent(&self) -> [f64; 3] {
        self.parameters()
    }

    /// Distance from the center to the farthest point of the shape. This is the
    /// horizon an influence function must cover.
    pub fn circumscribed_radius(&self) -> f64 {
        match *self {
            Shape::Sphere { radius } => radius,
            Shape::Cube { half_edge } => half_edge * 3f64.sqrt(),
            Shape::Cuboid { half_edges: [a, b, c] } => (a * a + b * b + c * c).sqrt(),
            Shape::Ellipsoid { semi_axes: [a, b, c] } => a.max(b).max(c),
        }
    }

    pub fn contains(&self, x: &Vector3<f64>) -> bool {
        let slack = 1.0 + BOUNDARY_SLACK;
        match *self {
            Shape::Sphere { radius } => x.norm_squared() <= radius * radius * slack,
            Shape::Cube { half_edge } => x.amax() <= half_edge * slack,
            Shape::Cuboid { half_edges } => (0..3).all(|i| x[i].abs() <= half_edges[i] * slack),
            Shape::Ellipsoid { semi_axes } => (0..3).map(|i| (x[i] / semi_axes[i]).powi(2)).sum::<f64>() <= slack,
        }
    }

    pub fn kind(&self) -> ShapeKind {
        match self {
            Shape::Sphere { .. } => ShapeKind::Sphere,
            Shape::Cube { .. } => ShapeKind::Cube,
            Shape::Cuboid { .. } => ShapeKind::Cuboid,
            Shape::Ellipsoid { .. } => ShapeKind::Ellipsoid,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Sphere { radius } => write!(f, "sphere of radius {radius}"),
            Shape::Cube { half_edge } => write!(f, "cube of half-edge {half_edge}"),
            Shape::Cuboid { half_edges: [a, b, c] } => write!(f, "cuboid of half-edges {a}×{b}×{c}"),
            Shape::Ellipsoid { semi_axes: [a, b, c] } => write!(f, "ellipsoid of semi-axes {a}×{b}×{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Sphere,
    Cube,
    Cuboid,
    Ellipsoid,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 4] = [
        ShapeKind::Sphere,
        ShapeKind::Cube,
        ShapeKind::Cuboid,
        ShapeKind::Ellipsoid,
    ];

    /// Default proportions for a nominal horizon `δ`: sphere of radius `δ`, cube
    /// of edge `2δ`, cuboid of edges `(8δ/6, 10δ/6, 2δ)` and ellipsoid of
    /// semi-axes `(4δ/6, 5δ/6, δ)`.
    pub fn at_horizon(self, horizon: f64) -> Shape {
        let d = horizon;
        match self {
            ShapeKind::Sphere => Shape::Sphere { radius: d },
            ShapeKind::Cube => Shape::Cube { half_edge: d },
            ShapeKind::Cuboid => Shape::Cuboid {
                half_edges: [4.0 * d / 6.0, 5.0 * d / 6.0, d],
            },
            ShapeKind::Ellipsoid => Shape::Ellipsoid {
                semi_axes: [4.0 * d / 6.0, 5.0 * d / 6.0, d],
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Sphere => "sphere",
            ShapeKind::Cube => "cube",
            ShapeKind::Cuboid => "cuboid",
            ShapeKind::Ellipsoid => "ellipsoid",
        }
    }
}

impl FromStr for ShapeKind {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        ShapeKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| LatticeError::Unknown {
                what: "shape",
                value: s.to_string(),
            })
    }
}

/// Ordered bond list of one particle's neighborhood.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    bonds: Vec<Bond>,
    shape: Shape,
    spacing: f64,
}

impl Neighborhood {
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Horizon required of an influence function on this neighborhood.
    pub fn influence_horizon(&self) -> f64 {
        self.shape.circumscribed_radius()
    }

    /// Index of the bond `−ξ` paired with bond `k`. Generation order is
    /// lexicographic on a point set closed under negation, and negation
    /// reverses that order, so the partner of `k` is `M − 1 − k`.
    pub fn opposite(&self, k: usize) -> usize {
        self.bonds.len() - 1 - k
    }

    pub fn total_volume(&self) -> f64 {
        self.bonds.iter().map(|b| b.volume).sum()
    }
}

fn check_positive(x: f64) -> Result<f64, LatticeError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(LatticeError::BadShapeParameter(x))
    }
}

/// All grid offsets `ξ = Δ·n`, `n ∈ ℤ³ \ {0}`, that fall inside `shape`
/// (boundary included), in lexicographic order of `n`. Every bond carries the
/// particle volume `Δ³`.
pub fn build_neighborhood(shape: Shape, spacing: f64) -> Result<Neighborhood, LatticeError> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(LatticeError::BadSpacing(spacing));
    }
    for p in shape.parameters() {
        check_positive(p)?;
    }
    let reach: Vec<i64> = shape
        .extent()
        .iter()
        .map(|e| (e / spacing * (1.0 + BOUNDARY_SLACK)).floor() as i64)
        .collect();
    let volume = spacing.powi(3);
    let mut bonds = Vec::new();
    for i in -reach[0]..=reach[0] {
        for j in -reach[1]..=reach[1] {
            for k in -reach[2]..=reach[2] {
                if (i, j, k) == (0, 0, 0) {
                    continue;
                }
                let xi = Vector3::new(i as f64, j as f64, k as f64) * spacing;
                if shape.contains(&xi) {
                    bonds.push(Bond {
                        xi,
                        length: xi.norm(),
                        volume,
                    });
                }
            }
        }
    }
    if bonds.is_empty() {
        return Err(LatticeError::HorizonTooSmall(shape));
    }
    Ok(Neighborhood { bonds, shape, spacing })
}

/// Replaces every `ξ` by `Qξ`; lengths, volumes and order are kept.
pub fn transform_neighborhood(n: &Neighborhood, q: &OrthogonalTransform) -> Neighborhood {
    let bonds = n
        .bonds
        .iter()
        .map(|b| Bond {
            xi: q.apply(&b.xi),
            ..*b
        })
        .collect();
    Neighborhood {
        bonds,
        shape: n.shape,
        spacing: n.spacing,
    }
}

/// `R_x R_y R_z`, each factor a rotation by `theta` about one coordinate axis.
/// The `y` factor follows the sign convention `[[c, 0, −s], [0, 1, 0], [s, 0, c]]`.
pub fn composed_rotation(theta: f64) -> OrthogonalTransform {
    let (s, c) = theta.sin_cos();
    let rx = Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c);
    let ry = Matrix3::new(c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c);
    let rz = Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
    OrthogonalTransform::new(rx * ry * rz).expect("product of rotations is orthogonal")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InfluenceKind {
    /// `ω = 1`
    Constant,
    /// `ω = δ/|ξ|`
    Inverse,
    /// `ω = 1 − |ξ|/δ`
    Hat,
    /// `ω = 1 − (|ξ|/δ)^p`
    Power { exponent: f64 },
}

impl InfluenceKind {
    pub const DEFAULT_POWER_EXPONENT: f64 = 1.5;

    pub fn name(&self) -> &'static str {
        match self {
            InfluenceKind::Constant => "constant",
            InfluenceKind::Inverse => "inverse",
            InfluenceKind::Hat => "hat",
            InfluenceKind::Power { .. } => "power",
        }
    }

    /// Parses `constant`, `inverse`, `hat` or `power`; `exponent` is only used
    /// by `power` and falls back to 3/2.
    pub fn parse(name: &str, exponent: Option<f64>) -> Result<Self, LatticeError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "constant" => Ok(InfluenceKind::Constant),
            "inverse" => Ok(InfluenceKind::Inverse),
            "hat" => Ok(InfluenceKind::Hat),
            "power" => {
                let p = exponent.unwrap_or(Self::DEFAULT_POWER_EXPONENT);
                if !(p.is_finite() && p > 0.0) {
                    return Err(LatticeError::BadExponent(p));
                }
                Ok(InfluenceKind::Power { exponent: p })
            }
            _ => Err(LatticeError::Unknown {
                what: "influence function",
                value: name.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfluenceFunction {
    pub kind: InfluenceKind,
    pub horizon: f64,
}

impl InfluenceFunction {
    pub fn new(kind: InfluenceKind, horizon: f64) -> Result<Self, LatticeError> {
        check_positive(horizon)?;
        if let InfluenceKind::Power { exponent } = kind {
            if !(exponent.is_finite() && exponent > 0.0) {
                return Err(LatticeError::BadExponent(exponent));
            }
        }
        Ok(InfluenceFunction { kind, horizon })
    }

    /// Influence function whose horizon covers every bond of `n`.
    pub fn for_neighborhood(kind: InfluenceKind, n: &Neighborhood) -> Result<Self, LatticeError> {
        Self::new(kind, n.influence_horizon())
    }

    pub fn value(&self, length: f64) -> Result<f64, LatticeError> {
        influence_value(self, length)
    }
}

pub fn influence_value(f: &InfluenceFunction, length: f64) -> Result<f64, LatticeError> {
    let delta = f.horizon;
    if !(length > 0.0 && length <= delta * (1.0 + BOUNDARY_SLACK)) {
        return Err(LatticeError::OutsideHorizon { length, horizon: delta });
    }
    let r = (length / delta).min(1.0);
    Ok(match f.kind {
        InfluenceKind::Constant => 1.0,
        InfluenceKind::Inverse => delta / length,
        InfluenceKind::Hat => 1.0 - r,
        InfluenceKind::Power { exponent } => 1.0 - r.powf(exponent),
    })
}
