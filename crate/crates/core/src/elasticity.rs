//! Fourth-order elasticity tensor algebra.
//!
//! Stiffness is held either as a symmetric 6×6 Voigt matrix ([`VoigtStiffness`])
//! or as the full 3×3×3×3 array ([`FullStiffness`]). Voigt index `α` maps to the
//! Cartesian pair `1→11, 2→22, 3→33, 4→23, 5→31, 6→12` (zero-based in code).
//!
//! Distances between tensors use the full 81-component Frobenius norm. On the 21
//! independent Voigt components that norm carries the weights
//! `w_αβ = m(α)·m(β)·(2 − δ_αβ)` with `m = 1` for normal and `m = 2` for shear
//! indices; see [`COMPONENT_WEIGHTS`].

use nalgebra::{Matrix3, Matrix6, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cartesian index pair of each Voigt index.
pub const VOIGT_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (2, 0), (0, 1)];

/// Row-major upper-triangle ordering of the 21 independent Voigt components:
/// 11, 12, 13, 14, 15, 16, 22, 23, …, 66.
pub const COMPONENT_ORDER: [(usize, usize); 21] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 1),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 2),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 3),
    (3, 4),
    (3, 5),
    (4, 4),
    (4, 5),
    (5, 5),
];

/// Number of full-tensor entries represented by each of the 21 components.
pub const COMPONENT_WEIGHTS: [f64; 21] = component_weights();

const fn multiplicity(alpha: usize) -> f64 {
    if alpha < 3 {
        1.0
    } else {
        2.0
    }
}

const fn component_weights() -> [f64; 21] {
    let mut w = [0.0; 21];
    let mut n = 0;
    while n < 21 {
        let (a, b) = COMPONENT_ORDER[n];
        let off = if a == b { 1.0 } else { 2.0 };
        w[n] = multiplicity(a) * multiplicity(b) * off;
        n += 1;
    }
    w
}

/// Voigt index of the Cartesian pair `(i, j)`.
pub fn voigt_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) => 3,
        (0, 2) => 4,
        (0, 1) => 5,
        _ => panic!("cartesian index out of range: ({i}, {j})"),
    }
}

/// Relative symmetry tolerance applied by [`VoigtStiffness::new`].
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElasticityError {
    #[error("stiffness matrix contains a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("stiffness matrix is not symmetric: entries ({row}, {col}) differ by {relative:e} (relative)")]
    Asymmetric { row: usize, col: usize, relative: f64 },
    #[error("fourth-order tensor violates minor/major symmetry by {0:e} (relative)")]
    TensorSymmetry(f64),
    #[error("matrix is not orthogonal: |QᵀQ − I| = {0:e}")]
    NotOrthogonal(f64),
    #[error("reflection normal must have unit length, got |n| = {0}")]
    NonUnitNormal(f64),
    #[error("reference stiffness is identically zero")]
    ZeroReference,
    #[error("stiffness matrix is singular; compliance does not exist")]
    Singular,
}

/// Symmetric 6×6 elastic stiffness matrix in Voigt notation (GPa).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VoigtRepr", into = "VoigtRepr")]
pub struct VoigtStiffness {
    entries: Matrix6<f64>,
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct VoigtRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    voigt: [[f64; 6]; 6],
}

impl TryFrom<VoigtRepr> for VoigtStiffness {
    type Error = ElasticityError;

    fn try_from(r: VoigtRepr) -> Result<Self, Self::Error> {
        let v = VoigtStiffness::new(r.voigt)?;
        Ok(match r.name {
            Some(n) => v.with_name(n),
            None => v,
        })
    }
}

impl From<VoigtStiffness> for VoigtRepr {
    fn from(v: VoigtStiffness) -> Self {
        VoigtRepr {
            voigt: v.to_array(),
            name: v.name,
        }
    }
}

impl VoigtStiffness {
    /// Builds a stiffness matrix, symmetrizing asymmetry up to
    /// [`CONSTRUCTION_TOLERANCE`] relative to the largest entry.
    pub fn new(entries: [[f64; 6]; 6]) -> Result<Self, ElasticityError> {
        Self::with_tolerance(entries, CONSTRUCTION_TOLERANCE)
    }

    pub fn with_tolerance(entries: [[f64; 6]; 6], tolerance: f64) -> Result<Self, ElasticityError> {
        let mut scale = 0.0f64;
        for (i, row) in entries.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(ElasticityError::NonFinite(i, j));
                }
                scale = scale.max(x.abs());
            }
        }
        let mut m = Matrix6::zeros();
        for i in 0..6 {
            m[(i, i)] = entries[i][i];
            for j in (i + 1)..6 {
                let (a, b) = (entries[i][j], entries[j][i]);
                if a != b {
                    let relative = (a - b).abs() / scale;
                    if relative > tolerance {
                        return Err(ElasticityError::Asymmetric {
                            row: i,
                            col: j,
                            relative,
                        });
                    }
                }
                let s = if a == b { a } else { 0.5 * a + 0.5 * b };
                m[(i, j)] = s;
                m[(j, i)] = s;
            }
        }
        Ok(VoigtStiffness { entries: m, name: None })
    }

    pub fn from_matrix(m: &Matrix6<f64>) -> Result<Self, ElasticityError> {
        let mut a = [[0.0; 6]; 6];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = m[(i, j)];
            }
        }
        Self::new(a)
    }

    /// Builds the matrix from its 21 upper-triangle components in
    /// [`COMPONENT_ORDER`].
    pub fn from_components(c: &[f64; 21]) -> Result<Self, ElasticityError> {
        let mut a = [[0.0; 6]; 6];
        for (n, &(i, j)) in COMPONENT_ORDER.iter().enumerate() {
            a[i][j] = c[n];
            a[j][i] = c[n];
        }
        Self::new(a)
    }

    pub fn zeros() -> Self {
        VoigtStiffness {
            entries: Matrix6::zeros(),
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Zero-based Voigt entry `(α, β)`.
    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        self.entries[(alpha, beta)]
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.entries
    }

    pub fn to_array(&self) -> [[f64; 6]; 6] {
        let mut a = [[0.0; 6]; 6];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.entries[(i, j)];
            }
        }
        a
    }

    pub fn components(&self) -> [f64; 21] {
        let mut c = [0.0; 21];
        for (n, &(i, j)) in COMPONENT_ORDER.iter().enumerate() {
            c[n] = self.entries[(i, j)];
        }
        c
    }

    pub fn to_vector21(&self) -> StiffnessVector21 {
        StiffnessVector21 {
            components: self.components(),
        }
    }

    pub fn to_full(&self) -> FullStiffness {
        voigt_to_full(self)
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &VoigtStiffness) -> f64 {
        (self.entries - other.entries).abs().max()
    }
}

/// The 21 independent stiffness components with their metric weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessVector21 {
    pub components: [f64; 21],
}

impl StiffnessVector21 {
    pub fn weights(&self) -> &'static [f64; 21] {
        &COMPONENT_WEIGHTS
    }

    pub fn weighted_norm(&self) -> f64 {
        self.components
            .iter()
            .zip(COMPONENT_WEIGHTS.iter())
            .map(|(c, w)| w * c * c)
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_voigt(&self) -> Result<VoigtStiffness, ElasticityError> {
        VoigtStiffness::from_components(&self.components)
    }
}

type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

/// Full fourth-order stiffness tensor `C_ijkl` (GPa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullStiffness {
    entries: Tensor4,
}

fn each_index() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..81).map(|n| (n / 27, (n / 9) % 3, (n / 3) % 3, n % 3))
}

impl FullStiffness {
    /// Accepts a tensor whose minor and major symmetries hold to 1e-12 relative.
    pub fn new(entries: Tensor4) -> Result<Self, ElasticityError> {
        let t = FullStiffness { entries };
        let scale = t.frobenius_norm();
        let mut worst = 0.0f64;
        for (i, j, k, l) in each_index() {
            let c = t.get(i, j, k, l);
            for other in [t.get(j, i, k, l), t.get(i, j, l, k), t.get(k, l, i, j)] {
                worst = worst.max((c - other).abs());
            }
        }
        if scale > 0.0 && worst / scale > 1e-12 {
            return Err(ElasticityError::TensorSymmetry(worst / scale));
        }
        Ok(t)
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.entries[i][j][k][l]
    }

    pub fn entries(&self) -> &Tensor4 {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> f64 {
        each_index()
            .map(|(i, j, k, l)| self.entries[i][j][k][l].powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_voigt(&self) -> VoigtStiffness {
        full_to_voigt(self)
    }

    /// Averages over the eight index orders related by minor and major
    /// symmetry. Exact (bitwise) on inputs that already have them.
    fn symmetrized(raw: &Tensor4) -> Tensor4 {
        let mut out = [[[[0.0; 3]; 3]; 3]; 3];
        for (i, j, k, l) in each_index() {
            let mut v = [
                raw[i][j][k][l],
                raw[j][i][k][l],
                raw[i][j][l][k],
                raw[j][i][l][k],
                raw[k][l][i][j],
                raw[l][k][i][j],
                raw[k][l][j][i],
                raw[l][k][j][i],
            ];
            v.sort_by(f64::total_cmp);
            // Pairwise so that eight equal values sum (and divide) exactly.
            let sum = ((v[0] + v[1]) + (v[2] + v[3])) + ((v[4] + v[5]) + (v[6] + v[7]));
            out[i][j][k][l] = sum / 8.0;
        }
        out
    }
}

pub fn voigt_to_full(v: &VoigtStiffness) -> FullStiffness {
    let mut t = [[[[0.0; 3]; 3]; 3]; 3];
    for (i, j, k, l) in each_index() {
        t[i][j][k][l] = v.get(voigt_index(i, j), voigt_index(k, l));
    }
    FullStiffness { entries: t }
}

pub fn full_to_voigt(c: &FullStiffness) -> VoigtStiffness {
    let mut m = Matrix6::zeros();
    for (a, &(i, j)) in VOIGT_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in VOIGT_PAIRS.iter().enumerate() {
            m[(a, b)] = c.get(i, j, k, l);
        }
    }
    VoigtStiffness { entries: m, name: None }
}

/// Orthogonal 3×3 transformation `Q` (rotation or improper rotation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalTransform {
    q: Matrix3<f64>,
}

impl OrthogonalTransform {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(q: Matrix3<f64>) -> Result<Self, ElasticityError> {
        let defect = (q.transpose() * q - Matrix3::identity()).abs().max();
        if !defect.is_finite() || defect > Self::TOLERANCE {
            return Err(ElasticityError::NotOrthogonal(defect));
        }
        let det = q.determinant();
        if (det.abs() - 1.0).abs() > Self::TOLERANCE {
            return Err(ElasticityError::NotOrthogonal((det.abs() - 1.0).abs()));
        }
        Ok(OrthogonalTransform { q })
    }

    pub fn identity() -> Self {
        OrthogonalTransform { q: Matrix3::identity() }
    }

    /// Central inversion `−I`.
    pub fn inversion() -> Self {
        OrthogonalTransform {
            q: -Matrix3::identity(),
        }
    }

    /// Right-handed rotation by `theta` about `e₃`.
    pub fn rotation_z(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        OrthogonalTransform {
            q: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
        }
    }

    /// Rotation by `theta` about an arbitrary (normalized internally) axis.
    pub fn rotation_about(axis: Vector3<f64>, theta: f64) -> Result<Self, ElasticityError> {
        let n = axis.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(ElasticityError::NonUnitNormal(n));
        }
        let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), theta);
        Ok(OrthogonalTransform { q: *rot.matrix() })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.q
    }

    pub fn determinant(&self) -> f64 {
        self.q.determinant()
    }

    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.q * x
    }

    /// `self` applied after `first`, i.e. the matrix `self · first`.
    pub fn after(&self, first: &OrthogonalTransform) -> OrthogonalTransform {
        OrthogonalTransform { q: self.q * first.q }
    }

    pub fn transpose(&self) -> OrthogonalTransform {
        OrthogonalTransform { q: self.q.transpose() }
    }
}

/// Reflection `I − 2 n⊗n` across the plane with unit normal `n`.
pub fn reflection_transform(n: Vector3<f64>) -> Result<OrthogonalTransform, ElasticityError> {
    let len = n.norm();
    if !len.is_finite() || (len - 1.0).abs() > OrthogonalTransform::TOLERANCE {
        return Err(ElasticityError::NonUnitNormal(len));
    }
    Ok(OrthogonalTransform {
        q: Matrix3::identity() - 2.0 * n * n.transpose(),
    })
}

/// `C'_pqrs = Q_pi Q_qj Q_rk Q_sl C_ijkl`.
pub fn rotate_stiffness(c: &FullStiffness, q: &OrthogonalTransform) -> FullStiffness {
    let q = q.matrix();
    let mut a = c.entries;
    // Contract one index at a time; each pass moves the transformed index to the front.
    for _ in 0..4 {
        let mut b = [[[[0.0; 3]; 3]; 3]; 3];
        for (p, i, j, k) in each_index() {
            let mut s = 0.0;
            for l in 0..3 {
                s += q[(p, l)] * a[i][j][k][l];
            }
            b[p][i][j][k] = s;
        }
        a = b;
    }
    FullStiffness {
        entries: FullStiffness::symmetrized(&a),
    }
}

/// Frobenius distance `‖a − b‖ / ‖reference‖` over all 81 entries.
pub fn tensor_distance(a: &FullStiffness, b: &FullStiffness, reference: &FullStiffness) -> f64 {
    let num = each_index()
        .map(|(i, j, k, l)| (a.get(i, j, k, l) - b.get(i, j, k, l)).powi(2))
        .sum::<f64>()
        .sqrt();
    let den = reference.frobenius_norm();
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

pub fn is_symmetry_transform(c: &FullStiffness, q: &OrthogonalTransform, tol: f64) -> bool {
    tensor_distance(&rotate_stiffness(c, q), c, c) <= tol
}

/// Relative Frobenius norm of `C_ijkl − C_ikjl`; zero iff Cauchy's relations hold.
pub fn cauchy_residual(c: &FullStiffness) -> f64 {
    let mut swapped = [[[[0.0; 3]; 3]; 3]; 3];
    for (i, j, k, l) in each_index() {
        swapped[i][j][k][l] = c.get(i, k, j, l);
    }
    let swapped = FullStiffness { entries: swapped };
    let norm = c.frobenius_norm();
    if norm == 0.0 {
        return 0.0;
    }
    tensor_distance(c, &swapped, c)
}

/// Orthogonal projection onto fully symmetric tensors,
/// `S_ijkl = (C_ijkl + C_ikjl + C_iljk) / 3`.
pub fn cauchy_project(c: &FullStiffness) -> FullStiffness {
    let mut s = [[[[0.0; 3]; 3]; 3]; 3];
    for (i, j, k, l) in each_index() {
        let mut v = [c.get(i, j, k, l), c.get(i, k, j, l), c.get(i, l, j, k)];
        // Sorting makes every permutation of (i,j,k,l) see the same summation order.
        v.sort_by(f64::total_cmp);
        s[i][j][k][l] = v[0] + ((v[1] - v[0]) + (v[2] - v[0])) / 3.0;
    }
    FullStiffness { entries: s }
}

/// Voigt-level convenience wrapper around [`cauchy_project`].
pub fn cauchy_project_voigt(v: &VoigtStiffness) -> VoigtStiffness {
    let p = full_to_voigt(&cauchy_project(&voigt_to_full(v)));
    match v.name() {
        Some(n) => p.with_name(n),
        None => p,
    }
}

/// Relative error between a reference and a calibrated stiffness.
///
/// With `weighted` the 21 components carry [`COMPONENT_WEIGHTS`], which equals
/// the 81-entry Frobenius norm of the full tensors.
pub fn relative_error(
    reference: &VoigtStiffness,
    calibrated: &VoigtStiffness,
    weighted: bool,
) -> Result<f64, ElasticityError> {
    let r = reference.components();
    let p = calibrated.components();
    let mut num = 0.0;
    let mut den = 0.0;
    for n in 0..21 {
        let w = if weighted { COMPONENT_WEIGHTS[n] } else { 1.0 };
        num += w * (r[n] - p[n]).powi(2);
        den += w * r[n] * r[n];
    }
    if den == 0.0 {
        return Err(ElasticityError::ZeroReference);
    }
    Ok((num / den).sqrt())
}

/// Voigt and Reuss estimates of the bulk and shear moduli.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoigtReussBounds {
    pub bulk_voigt: f64,
    pub bulk_reuss: f64,
    pub shear_voigt: f64,
    pub shear_reuss: f64,
}

impl VoigtReussBounds {
    pub fn of(c: &VoigtStiffness) -> Result<Self, ElasticityError> {
        let m = c.matrix();
        let s = m.try_inverse().ok_or(ElasticityError::Singular)?;
        if s.iter().any(|x| !x.is_finite()) {
            return Err(ElasticityError::Singular);
        }
        let axial = |a: &Matrix6<f64>| a[(0, 0)] + a[(1, 1)] + a[(2, 2)];
        let off = |a: &Matrix6<f64>| a[(0, 1)] + a[(1, 2)] + a[(2, 0)];
        let shear = |a: &Matrix6<f64>| a[(3, 3)] + a[(4, 4)] + a[(5, 5)];
        let bulk_voigt = (axial(m) + 2.0 * off(m)) / 9.0;
        let bulk_reuss = 1.0 / (axial(&s) + 2.0 * off(&s));
        let shear_voigt = (axial(m) - off(m) + 3.0 * shear(m)) / 15.0;
        let shear_reuss = 15.0 / (4.0 * axial(&s) - 4.0 * off(&s) + 3.0 * shear(&s));
        Ok(VoigtReussBounds {
            bulk_voigt,
            bulk_reuss,
            shear_voigt,
            shear_reuss,
        })
    }

    pub fn bulk_hill(&self) -> f64 {
        0.5 * (self.bulk_voigt + self.bulk_reuss)
    }

    pub fn shear_hill(&self) -> f64 {
        0.5 * (self.shear_voigt + self.shear_reuss)
    }

    pub fn universal_anisotropy_index(&self) -> f64 {
        5.0 * self.shear_voigt / self.shear_reuss + self.bulk_voigt / self.bulk_reuss - 6.0
    }
}

/// `A_U = 5 G_V/G_R + K_V/K_R − 6`.
pub fn universal_anisotropy_index(c: &VoigtStiffness) -> Result<f64, ElasticityError> {
    Ok(VoigtReussBounds::of(c)?.universal_anisotropy_index())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Material;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn identity_diagonal() -> VoigtStiffness {
        let mut a = [[0.0; 6]; 6];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        VoigtStiffness::new(a).unwrap()
    }

    #[test]
    fn weights_match_full_tensor_multiplicity() {
        assert_eq!(COMPONENT_WEIGHTS[0], 1.0);
        assert_eq!(COMPONENT_WEIGHTS[1], 2.0); // 12
        assert_eq!(COMPONENT_WEIGHTS[3], 4.0); // 14
        assert_eq!(COMPONENT_WEIGHTS[15], 4.0); // 44
        assert_eq!(COMPONENT_WEIGHTS[16], 8.0); // 45
                                                // 21 weighted components account for all 81 entries.
        assert_eq!(COMPONENT_WEIGHTS.iter().sum::<f64>(), 81.0);
    }

    #[test]
    fn asymmetric_input_is_rejected_or_symmetrized() {
        let mut a = Material::Kio3.stiffness().to_array();
        a[0][1] += 1e-12;
        let v = VoigtStiffness::new(a).unwrap();
        assert_eq!(v.get(0, 1), v.get(1, 0));
        a[0][1] += 1.0;
        assert!(matches!(
            VoigtStiffness::new(a),
            Err(ElasticityError::Asymmetric { row: 0, col: 1, .. })
        ));
        a[2][2] = f64::NAN;
        assert!(matches!(VoigtStiffness::new(a), Err(ElasticityError::NonFinite(..))));

        let mut big = [[0.0; 6]; 6];
        big[0][1] = f64::MAX;
        big[1][0] = f64::MAX * (1.0 - 1e-12);
        assert!(VoigtStiffness::new(big).unwrap().get(0, 1).is_finite());
    }

    #[test]
    fn identity_voigt_maps_to_unit_normal_and_shear_entries() {
        let f = voigt_to_full(&identity_diagonal());
        for i in 0..3 {
            assert_eq!(f.get(i, i, i, i), 1.0);
        }
        assert_eq!(f.get(1, 2, 1, 2), 1.0);
        assert_eq!(f.get(0, 2, 0, 2), 1.0);
        assert_eq!(f.get(0, 1, 1, 0), 1.0);
        assert_eq!(f.get(0, 0, 1, 1), 0.0);
        assert_eq!(f.get(0, 0, 1, 2), 0.0);
    }

    #[test]
    fn voigt_to_full_index_map() {
        let kio3 = voigt_to_full(&Material::Kio3.stiffness());
        assert_eq!(kio3.get(2, 0, 0, 1), 1.0); // C_3112 = C_56
        assert_eq!(kio3.get(0, 2, 0, 1), 1.0); // C_1312
        let cote = voigt_to_full(&Material::CoTeO4.stiffness());
        assert_eq!(cote.get(0, 0, 2, 2), 54.0);
    }

    #[test]
    fn full_tensor_symmetry_is_checked() {
        let mut t = *voigt_to_full(&Material::Kio3.stiffness()).entries();
        assert!(FullStiffness::new(t).is_ok());
        t[0][1][2][2] += 0.5;
        assert!(matches!(FullStiffness::new(t), Err(ElasticityError::TensorSymmetry(_))));
    }

    #[test]
    fn rotation_by_identity_and_inversion_is_exact() {
        for m in Material::ALL {
            let c = m.stiffness().to_full();
            assert_eq!(rotate_stiffness(&c, &OrthogonalTransform::identity()), c);
            assert_eq!(rotate_stiffness(&c, &OrthogonalTransform::inversion()), c);
        }
    }

    #[test]
    fn trigonal_threefold_axis() {
        // An exactly trigonal tensor (C66 = (C11 − C12)/2) is invariant under 2π/3 about e₃.
        let mut a = Material::Ta2C.stiffness().to_array();
        a[5][5] = 0.5 * (a[0][0] - a[0][1]);
        let exact = VoigtStiffness::new(a).unwrap().to_full();
        let r = OrthogonalTransform::rotation_z(2.0 * PI / 3.0);
        assert!(tensor_distance(&rotate_stiffness(&exact, &r), &exact, &exact) < 1e-14);
        // A sixfold turn flips the sign of C14, so π/3 is not a symmetry of Ta₂C.
        let ta2c = Material::Ta2C.stiffness().to_full();
        let r6 = OrthogonalTransform::rotation_z(PI / 3.0);
        let rotated = rotate_stiffness(&ta2c, &r6).to_voigt();
        assert_relative_eq!(rotated.get(0, 3), 45.0, epsilon = 1e-9);
        assert!(!is_symmetry_transform(&ta2c, &r6, 1e-6));
        // The catalog matrix is only approximately trigonal (C66 = 153 vs 152.5).
        let d = tensor_distance(&rotate_stiffness(&ta2c, &r), &ta2c, &ta2c);
        assert!(d > 1e-4 && d < 2e-3, "{d}");
    }

    #[test]
    fn reflection_examples() {
        let r = reflection_transform(Vector3::z()).unwrap();
        assert_eq!(*r.matrix(), Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)));
        assert_relative_eq!(r.determinant(), -1.0);

        let n = Vector3::new(1.0, 1.0, 0.0) / 2f64.sqrt();
        let r = reflection_transform(n).unwrap();
        let expected = Matrix3::new(0.0, -1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert!((r.matrix() - expected).abs().max() < 1e-15);
        let twice = r.after(&r);
        assert!((twice.matrix() - Matrix3::identity()).abs().max() < 1e-15);

        assert!(matches!(
            reflection_transform(Vector3::new(1.0, 1.0, 0.0)),
            Err(ElasticityError::NonUnitNormal(_))
        ));
    }

    #[test]
    fn non_orthogonal_matrix_rejected() {
        let m = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(OrthogonalTransform::new(m).is_err());
        assert!(OrthogonalTransform::new(Matrix3::identity() * 2.0).is_err());
    }

    #[test]
    fn symmetry_transform_examples() {
        let pyro = Material::Pyroceram9608.stiffness().to_full();
        let q = OrthogonalTransform::rotation_about(Vector3::new(0.3, -1.2, 0.7), 0.917).unwrap();
        assert!(is_symmetry_transform(&pyro, &q, 1e-12));

        let cote = Material::CoTeO4.stiffness().to_full();
        let rz = reflection_transform(Vector3::z()).unwrap();
        let rx = reflection_transform(Vector3::x()).unwrap();
        assert!(is_symmetry_transform(&cote, &rz, 1e-14));
        // C16, C26, C36 and C45 change sign under x ↦ −x.
        assert!(!is_symmetry_transform(&cote, &rx, 1e-6));
    }

    #[test]
    fn cauchy_residual_examples() {
        assert!(cauchy_residual(&Material::Pyroceram9608.stiffness().to_full()) < 1e-12);
        assert!(cauchy_residual(&Material::Si.stiffness().to_full()) > 0.0);
        let p = cauchy_project(&Material::Kio3.stiffness().to_full());
        assert_eq!(cauchy_residual(&p), 0.0);
    }

    #[test]
    fn cauchy_projection_examples() {
        let kio3 = cauchy_project_voigt(&Material::Kio3.stiffness());
        assert_relative_eq!(kio3.get(0, 1), 35.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(kio3.get(5, 5), 35.0 / 3.0, epsilon = 1e-12);
        let cote = cauchy_project_voigt(&Material::CoTeO4.stiffness());
        assert_relative_eq!(cote.get(2, 5), 68.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(cote.get(3, 4), 68.0 / 3.0, epsilon = 1e-12);
        // Entries outside Cauchy's relations are untouched.
        for m in Material::ALL {
            let v = m.stiffness();
            let p = cauchy_project_voigt(&v);
            for a in 0..3 {
                assert_eq!(p.get(a, a), v.get(a, a));
            }
            assert_eq!(p.get(0, 4), v.get(0, 4));
            assert_eq!(p.get(1, 3), v.get(1, 3));
            assert_eq!(p.get(2, 3), v.get(2, 3));
        }
        let pyro = Material::Pyroceram9608.stiffness();
        assert_eq!(
            cauchy_project_voigt(&pyro),
            pyro.clone().with_name(pyro.name().unwrap())
        );
    }

    #[test]
    fn relative_error_examples() {
        let kio3 = Material::Kio3.stiffness();
        assert_eq!(relative_error(&kio3, &kio3, true).unwrap(), 0.0);
        let e = relative_error(&kio3, &cauchy_project_voigt(&kio3), true).unwrap();
        assert!((e - 0.031873).abs() < 5e-7, "{e}");
        let cote = Material::CoTeO4.stiffness();
        let e = relative_error(&cote, &cauchy_project_voigt(&cote), true).unwrap();
        assert!((e - 0.04988).abs() < 5e-6, "{e}");
        assert_eq!(
            relative_error(&VoigtStiffness::zeros(), &kio3, true),
            Err(ElasticityError::ZeroReference)
        );
    }

    #[test]
    fn weighted_error_by_hand_for_kio3() {
        // Δ between KIO₃ and its projection, per affected component (pairs that
        // Cauchy's relations couple): value·weight summed by hand.
        //   C12,C66: 11,12 → 35/3   Δ = 2/3, 1/3   w = 2, 4
        //   C23,C44: 12,13 → 38/3   Δ = 2/3, 1/3   w = 2, 4
        //   C13,C55: 13,13 → 13     Δ = 0
        //   C14,C56: 1,1            Δ = 0
        //   C25,C46: −1,0 → −1/3    Δ = 2/3, 1/3   w = 4, 8
        //   C36,C45: 1,0 → 1/3      Δ = 2/3, 1/3   w = 4, 8
        let num: f64 = 2.0 * (2.0 * 4.0 / 9.0 + 4.0 / 9.0) + 2.0 * (4.0 * 4.0 / 9.0 + 8.0 / 9.0);
        let kio3 = Material::Kio3.stiffness();
        let den: f64 = kio3
            .components()
            .iter()
            .zip(COMPONENT_WEIGHTS)
            .map(|(c, w)| w * c * c)
            .sum();
        let e = relative_error(&kio3, &cauchy_project_voigt(&kio3), true).unwrap();
        assert_relative_eq!(e, (num / den).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn anisotropy_index_examples() {
        assert!(
            universal_anisotropy_index(&Material::Pyroceram9608.stiffness())
                .unwrap()
                .abs()
                < 1e-9
        );
        let spinel = universal_anisotropy_index(&Material::Spinel.stiffness()).unwrap();
        assert!((spinel - 1.2372).abs() < 1e-3, "{spinel}");
        let te2w = universal_anisotropy_index(&Material::Te2W.stiffness()).unwrap();
        assert!((te2w - 54.0623).abs() < 1e-2, "{te2w}");
        assert_eq!(
            universal_anisotropy_index(&VoigtStiffness::zeros()),
            Err(ElasticityError::Singular)
        );
    }

    #[test]
    fn hill_average_of_isotropic_material() {
        let b = VoigtReussBounds::of(&Material::Pyroceram9608.stiffness()).unwrap();
        assert_relative_eq!(b.bulk_hill(), (103.2 + 2.0 * 34.4) / 3.0, epsilon = 1e-12);
        assert_relative_eq!(b.shear_hill(), 34.4, epsilon = 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let v = Material::Ta2C.stiffness();
        let s = serde_json::to_string(&v).unwrap();
        let back: VoigtStiffness = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
