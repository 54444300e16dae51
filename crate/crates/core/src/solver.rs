//! Minimum-norm calibration of bond micromoduli.
//!
//! The unconstrained step is the pseudoinverse solution `c_ls = X⁺b`. The
//! constrained step finds the point of least Euclidean norm in
//! `{c : Xc = Xc_ls, c ≥ l}`, i.e. `c_ls` plus a null-space correction that
//! leaves the residual untouched.
//!
//! With `V` the orthonormal basis of the row space of `X` (rank `r`), the
//! equality reads `Vᵀc = a` with `a = Vᵀc_ls`. The problem is solved through
//! its `r`-dimensional concave dual
//!
//! ```text
//! maximize  d(μ) = μᵀa + Σ_N (½ c_N² − c_N v_Nᵀμ),   c(μ) = max(l, Vμ)
//! ```
//!
//! by a semismooth Newton iteration with exact line search. Feasibility is
//! settled first by a non-negative least-squares problem, since the dual is
//! unbounded when the feasible set is empty.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::{default_rank_tolerance, CoefficientSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(
        "infeasible: {bond_count} bonds (coefficient rank {rank}) cannot reach the least-squares \
         stiffness with micromoduli above the lower bound (relative violation {violation:.3e})"
    )]
    Infeasible {
        bond_count: usize,
        rank: usize,
        violation: f64,
    },
    #[error("lower bound has {got} entries, system has {expected} bonds")]
    BoundLength { expected: usize, got: usize },
    #[error("invalid solver option: {0}")]
    BadOption(&'static str),
}

/// Per-bond minimum micromodulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LowerBound {
    Uniform(f64),
    PerBond(Vec<f64>),
}

impl Default for LowerBound {
    fn default() -> Self {
        LowerBound::Uniform(0.0)
    }
}

impl LowerBound {
    pub fn resolve(&self, bond_count: usize) -> Result<DVector<f64>, SolverError> {
        let l = match self {
            LowerBound::Uniform(v) => DVector::from_element(bond_count, *v),
            LowerBound::PerBond(v) => {
                if v.len() != bond_count {
                    return Err(SolverError::BoundLength {
                        expected: bond_count,
                        got: v.len(),
                    });
                }
                DVector::from_column_slice(v)
            }
        };
        if l.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::BadOption("lower bound must be finite"));
        }
        Ok(l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Singular values below `rank_tolerance · σ_max` count as zero.
    /// `None` means `ε · max(21, M)`.
    pub rank_tolerance: Option<f64>,
    pub lower_bound: LowerBound,
    pub kkt_tolerance: f64,
    /// `None` means `50 · M`.
    pub max_iterations: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rank_tolerance: None,
            lower_bound: LowerBound::default(),
            kkt_tolerance: 1e-8,
            max_iterations: None,
        }
    }
}

impl SolverOptions {
    pub fn with_lower_bound(mut self, l: f64) -> Self {
        self.lower_bound = LowerBound::Uniform(l);
        self
    }

    fn validate(&self) -> Result<(), SolverError> {
        if let Some(t) = self.rank_tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(SolverError::BadOption("rank tolerance must be positive"));
            }
        }
        if !(self.kkt_tolerance.is_finite() && self.kkt_tolerance > 0.0) {
            return Err(SolverError::BadOption("KKT tolerance must be positive"));
        }
        if self.max_iterations == Some(0) {
            return Err(SolverError::BadOption("max_iterations must be positive"));
        }
        Ok(())
    }

    fn rank_tolerance_for(&self, bond_count: usize) -> f64 {
        self.rank_tolerance
            .unwrap_or_else(|| default_rank_tolerance(bond_count))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MicromoduliSolution {
    pub c: DVector<f64>,
    /// `‖Xc − b‖` in the system's metric.
    pub residual_norm: f64,
    pub solution_norm: f64,
    /// Bonds held at the lower bound.
    pub active_set_size: usize,
    pub converged: bool,
    pub iterations: usize,
    pub rank: usize,
    /// `‖Vᵀc − Vᵀc_ls‖`, the violation of residual invariance.
    pub equality_residual: f64,
}

/// Truncated SVD `X ≈ U_r Σ_r V_rᵀ`.
#[derive(Debug, Clone)]
pub struct RowSpace {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    /// `M × r`, orthonormal columns spanning the row space of `X`.
    pub v: DMatrix<f64>,
}

impl RowSpace {
    pub fn of(x: &DMatrix<f64>, rel_tol: f64) -> Self {
        let m = x.ncols();
        let svd = x.clone().svd(true, true);
        let u_full = svd.u.expect("requested U");
        let vt_full = svd.v_t.expect("requested Vᵀ");
        let s = &svd.singular_values;
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]).then(i.cmp(&j)));
        let top = order.first().map(|&i| s[i]).unwrap_or(0.0);
        let keep: Vec<usize> = order
            .into_iter()
            .filter(|&i| s[i] > rel_tol * top && s[i] > 0.0)
            .collect();
        let r = keep.len();
        let mut u = DMatrix::zeros(x.nrows(), r);
        let mut v = DMatrix::zeros(m, r);
        let mut sigma = DVector::zeros(r);
        for (k, &i) in keep.iter().enumerate() {
            u.set_column(k, &u_full.column(i));
            v.set_column(k, &vt_full.row(i).transpose());
            sigma[k] = s[i];
        }
        RowSpace { u, sigma, v }
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Coordinates of `X⁺b` in the basis `V`: `Σ⁻¹ Uᵀ b`.
    pub fn coordinates(&self, b: &DVector<f64>) -> DVector<f64> {
        (self.u.transpose() * b).component_div(&self.sigma)
    }
}

/// Pseudoinverse solution `X⁺b`. May contain negative entries.
pub fn min_norm_least_squares(sys: &CoefficientSystem, opts: &SolverOptions) -> DVector<f64> {
    let rs = RowSpace::of(sys.matrix(), opts.rank_tolerance_for(sys.bond_count()));
    &rs.v * rs.coordinates(sys.rhs())
}

/// Orthonormal basis `Z` (M × (M − r)) of the numerical null space of `X`.
pub fn null_space_basis(sys: &CoefficientSystem, opts: &SolverOptions) -> DMatrix<f64> {
    let m = sys.bond_count();
    let rs = RowSpace::of(sys.matrix(), opts.rank_tolerance_for(m));
    complement_basis(&rs.v)
}

/// Orthonormal basis of the orthogonal complement of the columns of `v`.
pub fn complement_basis(v: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, r) = v.shape();
    if r == 0 {
        return DMatrix::identity(m, m);
    }
    if r >= m {
        return DMatrix::zeros(m, 0);
    }
    // Apply the Householder reflectors of V = QR to the identity to get the full Qᵀ.
    let qr = v.clone().qr();
    let mut qt = DMatrix::identity(m, m);
    qr.q_tr_mul(&mut qt);
    qt.rows(r, m - r).transpose()
}

/// Outcome of a non-negative least-squares solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Lawson–Hanson active-set solver for `min ‖Ax − b‖` subject to `x ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iterations: usize) -> NnlsSolution {
    let (rows, n) = a.shape();
    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let scale = a.amax().max(f64::MIN_POSITIVE) * b.amax().max(f64::MIN_POSITIVE);
    let tol = 10.0 * f64::EPSILON * (rows.max(n) as f64) * scale;
    let mut iterations = 0;

    let solve_passive = |passive: &[bool]| -> DVector<f64> {
        let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let sub = a.select_columns(idx.iter());
        let s = sub
            .svd(true, true)
            .solve(b, f64::EPSILON * rows.max(idx.len()) as f64)
            .expect("SVD has U and Vᵀ");
        let mut full = DVector::zeros(n);
        for (k, &j) in idx.iter().enumerate() {
            full[j] = s[k];
        }
        full
    };

    loop {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]).then(j.cmp(&i)));
        let Some(j) = candidate else { break };
        if iterations >= max_iterations {
            break;
        }
        passive[j] = true;
        loop {
            iterations += 1;
            let s = solve_passive(&passive);
            let blocked: Vec<usize> = (0..n).filter(|&k| passive[k] && s[k] <= 0.0).collect();
            if blocked.is_empty() {
                x = s;
                break;
            }
            let alpha = blocked
                .iter()
                .map(|&k| x[k] / (x[k] - s[k]))
                .fold(f64::INFINITY, f64::min);
            x += alpha * (&s - &x);
            for k in 0..n {
                if passive[k] && x[k] <= tol.max(0.0) {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
            if iterations >= max_iterations {
                break;
            }
        }
    }
    let residual_norm = (b - a * &x).norm();
    NnlsSolution {
        x,
        residual_norm,
        iterations,
    }
}

/// Relative violation above which the constrained problem is declared infeasible.
pub const INFEASIBILITY_THRESHOLD: f64 = 1e-6;

/// Solves `min ½‖c‖²` subject to `Xc = Xc_ls` and `c ≥ l`.
pub fn constrained_min_norm(sys: &CoefficientSystem, opts: &SolverOptions) -> Result<MicromoduliSolution, SolverError> {
    opts.validate()?;
    let m = sys.bond_count();
    let l = opts.lower_bound.resolve(m)?;
    let rs = RowSpace::of(sys.matrix(), opts.rank_tolerance_for(m));
    let r = rs.rank();
    let v = &rs.v;
    let a = rs.coordinates(sys.rhs());
    let max_iterations = opts.max_iterations.unwrap_or(50 * m).max(1);

    let finish = |c: DVector<f64>, iterations: usize, converged: bool| {
        let residual_norm = (sys.matrix() * &c - sys.rhs()).norm();
        let equality_residual = (v.transpose() * &c - &a).norm();
        let active_set_size = c.iter().zip(l.iter()).filter(|(c, l)| c <= l).count();
        MicromoduliSolution {
            solution_norm: c.norm(),
            c,
            residual_norm,
            active_set_size,
            converged,
            iterations,
            rank: r,
            equality_residual,
        }
    };

    if r == 0 {
        let c = l.map(|x| x.max(0.0));
        return Ok(finish(c, 0, true));
    }

    let vt = v.transpose();
    let vt_l = &vt * &l;
    let scale = a.norm().max(vt_l.norm()).max(f64::MIN_POSITIVE);

    // Feasibility: is there u ≥ 0 with Vᵀ(l + u) = a?
    let c_ls = v * &a;
    if c_ls.iter().zip(l.iter()).any(|(c, l)| c < l) {
        let phase1 = nnls(&vt, &(&a - &vt_l), 3 * m.max(r));
        let violation = phase1.residual_norm / scale;
        if violation > INFEASIBILITY_THRESHOLD {
            return Err(SolverError::Infeasible {
                bond_count: m,
                rank: r,
                violation,
            });
        }
    }

    let primal = |mu: &DVector<f64>| -> (DVector<f64>, DVector<f64>) {
        let z = v * mu;
        let c = z.zip_map(&l, f64::max);
        (z, c)
    };

    let stop = 1e-14 * scale;
    let mut mu = a.clone();
    let (mut z, mut c) = primal(&mu);
    let mut g = &a - &vt * &c;
    let mut best = g.norm();
    let mut since_best = 0;
    let mut iterations = 0;

    while iterations < max_iterations && g.norm() > stop {
        iterations += 1;

        let mut h = DMatrix::<f64>::zeros(r, r);
        for n in 0..m {
            if z[n] > l[n] {
                let row = v.row(n);
                h.ger(1.0, &row.transpose(), &row.transpose(), 1.0);
            }
        }
        let eig = SymmetricEigen::new(h);
        let gq = eig.eigenvectors.transpose() * &g;
        let scaled = DVector::from_iterator(
            r,
            gq.iter()
                .zip(eig.eigenvalues.iter())
                .map(|(&x, &lam)| if lam > 1e-10 { x / lam } else { x }),
        );
        let dir = &eig.eigenvectors * scaled;
        let w = v * &dir;

        let Some(t) = exact_step(&dir, &a, &z, &w, &l, &c) else {
            return Err(SolverError::Infeasible {
                bond_count: m,
                rank: r,
                violation: g.norm() / scale,
            });
        };
        if t == 0.0 {
            break;
        }
        mu += t * dir;
        (z, c) = primal(&mu);
        g = &a - &vt * &c;

        let gn = g.norm();
        if gn < 0.5 * best {
            best = gn;
            since_best = 0;
        } else {
            best = best.min(gn);
            since_best += 1;
            if since_best >= 30 || (gn <= opts.kkt_tolerance * scale && since_best >= 3) {
                break;
            }
        }
    }

    let gn = g.norm();
    let converged = gn <= opts.kkt_tolerance * scale;
    if !converged && gn > INFEASIBILITY_THRESHOLD * scale {
        return Err(SolverError::Infeasible {
            bond_count: m,
            rank: r,
            violation: gn / scale,
        });
    }
    Ok(finish(c, iterations, converged))
}

/// Maximizer `t ≥ 0` of the dual along `μ + t·dir`. The directional
/// derivative `Δᵀa − Σ w_N max(l_N, z_N + t w_N)` is piecewise linear and
/// non-increasing with kinks where a bond crosses its bound. Returns `None`
/// when it stays positive for all `t`, which certifies an unbounded dual.
fn exact_step(
    dir: &DVector<f64>,
    a: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
    l: &DVector<f64>,
    c: &DVector<f64>,
) -> Option<f64> {
    let m = z.len();
    let mut value = dir.dot(a) - w.dot(c);
    if value <= 0.0 {
        return Some(0.0);
    }
    let mut slope = 0.0;
    let mut kinks = Vec::new();
    for n in 0..m {
        let free_now = z[n] > l[n] || (z[n] == l[n] && w[n] > 0.0);
        if free_now {
            slope -= w[n] * w[n];
        }
        if w[n] != 0.0 {
            let t = (l[n] - z[n]) / w[n];
            if t > 0.0 && t.is_finite() {
                kinks.push((t, n));
            }
        }
    }
    kinks.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut t_prev = 0.0;
    for (t, n) in kinks {
        let at_kink = value + slope * (t - t_prev);
        if at_kink <= 0.0 {
            return Some(t_prev - value / slope);
        }
        value = at_kink;
        t_prev = t;
        // Crossing upward frees the bond, crossing downward pins it.
        if w[n] > 0.0 {
            slope -= w[n] * w[n];
        } else {
            slope += w[n] * w[n];
        }
    }
    let norm2 = w.norm_squared();
    if slope < -1e-14 * norm2 {
        Some(t_prev - value / slope)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble, Metric};
    use crate::catalog::Material;
    use crate::elasticity::StiffnessVector21;
    use crate::lattice::{build_neighborhood, InfluenceFunction, InfluenceKind, Shape};
    use approx::assert_relative_eq;
    use nalgebra::Vector3;
    use proptest::prelude::*;

    fn single_column_system(xis: &[[f64; 3]], target: [f64; 21]) -> CoefficientSystem {
        let mut raw = DMatrix::zeros(21, xis.len());
        for (k, xi) in xis.iter().enumerate() {
            let v = Vector3::from(*xi);
            raw.column_mut(k)
                .copy_from_slice(&crate::assembly::bond_column(&v, v.norm(), 1.0, 1.0));
        }
        CoefficientSystem::from_parts(raw, StiffnessVector21 { components: target }, Metric::Weighted)
    }

    fn unit_c11() -> [f64; 21] {
        let mut t = [0.0; 21];
        t[0] = 1.0;
        t
    }

    fn sphere_system(delta: f64, kind: InfluenceKind, m: Material) -> CoefficientSystem {
        let n = build_neighborhood(Shape::Sphere { radius: delta }, 1.0).unwrap();
        let f = InfluenceFunction::for_neighborhood(kind, &n).unwrap();
        assemble(&n, &f, &m.stiffness()).unwrap()
    }

    #[test]
    fn zero_target_gives_zero_solution() {
        let sys = single_column_system(&[[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]], [0.0; 21]);
        let c = min_norm_least_squares(&sys, &SolverOptions::default());
        assert_eq!(c, DVector::zeros(2));
        let s = constrained_min_norm(&sys, &SolverOptions::default()).unwrap();
        assert_eq!(s.c, DVector::zeros(2));
    }

    #[test]
    fn single_axis_bond_inverts_half_factor() {
        let sys = single_column_system(&[[1.0, 0.0, 0.0]], unit_c11());
        let c = min_norm_least_squares(&sys, &SolverOptions::default());
        assert_relative_eq!(c[0], 2.0, epsilon = 1e-14);
        assert_eq!(null_space_basis(&sys, &SolverOptions::default()).ncols(), 0);
    }

    #[test]
    fn identical_columns_share_the_load() {
        let sys = single_column_system(&[[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]], unit_c11());
        let c = min_norm_least_squares(&sys, &SolverOptions::default());
        assert_relative_eq!(c[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(c[1], 1.0, epsilon = 1e-14);
        let z = null_space_basis(&sys, &SolverOptions::default());
        assert_eq!(z.ncols(), 1);
        let expected = 1.0 / 2f64.sqrt();
        assert_relative_eq!(z[(0, 0)].abs(), expected, epsilon = 1e-14);
        assert_relative_eq!(z[(0, 0)], -z[(1, 0)], epsilon = 1e-14);
    }

    #[test]
    fn null_space_of_full_sphere() {
        let sys = sphere_system(6.0, InfluenceKind::Inverse, Material::Kio3);
        let opts = SolverOptions::default();
        let z = null_space_basis(&sys, &opts);
        assert_eq!(z.shape(), (924, 909));
        let xz = sys.matrix() * &z;
        assert!(xz.norm() <= 1e-12 * sys.matrix().norm(), "{}", xz.norm());
        let gram = z.transpose() * &z - DMatrix::identity(909, 909);
        assert!(gram.amax() < 1e-12);
    }

    #[test]
    fn nnls_small_examples() {
        // Unconstrained optimum (1, −1) is clipped to the boundary.
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, -1.0, 0.0]);
        let s = nnls(&a, &b, 100);
        // min (x−1)² + (y+1)² + (x+y)² with y = 0 → x = 1/2.
        assert_relative_eq!(s.x[0], 0.5, epsilon = 1e-14);
        assert_eq!(s.x[1], 0.0);
        // Exactly representable target.
        let b = DVector::from_vec(vec![2.0, 3.0, 5.0]);
        let s = nnls(&a, &b, 100);
        assert_relative_eq!(s.x[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(s.x[1], 3.0, epsilon = 1e-14);
        assert!(s.residual_norm < 1e-13);
    }

    #[test]
    fn pyroceram_inverse_influence_bounds() {
        let sys = sphere_system(6.0, InfluenceKind::Inverse, Material::Pyroceram9608);
        let s = constrained_min_norm(&sys, &SolverOptions::default()).unwrap();
        let (lo, hi) = (s.c.min(), s.c.max());
        assert!((lo - 0.1726).abs() < 2e-3, "{lo}");
        assert!((hi - 0.2076).abs() < 2e-3, "{hi}");
        assert!(s.converged);
        assert_eq!(s.active_set_size, 0);
    }

    #[test]
    fn pyroceram_raised_lower_bound() {
        let sys = sphere_system(6.0, InfluenceKind::Constant, Material::Pyroceram9608);
        let s = constrained_min_norm(&sys, &SolverOptions::default().with_lower_bound(0.23)).unwrap();
        assert!(s.converged);
        assert!(s.c.min() >= 0.23);
        let mean = s.c.mean();
        assert!((mean - 0.2435).abs() < 5e-3, "{mean}");
    }

    #[test]
    fn monoclinic_small_horizon_is_infeasible() {
        let sys = sphere_system(2.0, InfluenceKind::Inverse, Material::CoTeO4);
        assert!(matches!(
            constrained_min_norm(&sys, &SolverOptions::default()),
            Err(SolverError::Infeasible { bond_count: 32, .. })
        ));
    }

    #[test]
    fn bound_vector_length_checked() {
        let sys = sphere_system(1.0, InfluenceKind::Inverse, Material::Si);
        let opts = SolverOptions {
            lower_bound: LowerBound::PerBond(vec![0.0; 5]),
            ..SolverOptions::default()
        };
        assert_eq!(
            constrained_min_norm(&sys, &opts),
            Err(SolverError::BoundLength { expected: 6, got: 5 })
        );
        let opts = SolverOptions {
            kkt_tolerance: 0.0,
            ..SolverOptions::default()
        };
        assert!(matches!(
            constrained_min_norm(&sys, &opts),
            Err(SolverError::BadOption(_))
        ));
    }

    #[test]
    fn kkt_conditions_hold_on_trigonal_solve() {
        let sys = sphere_system(3.0, InfluenceKind::Inverse, Material::Ta2C);
        let opts = SolverOptions::default();
        let s = constrained_min_norm(&sys, &opts).unwrap();
        let c_ls = min_norm_least_squares(&sys, &opts);
        assert!(c_ls.min() < 0.0, "test needs an active bound");
        assert!(s.active_set_size > 0);
        // Stationarity: c* − λ lies in the row space, with λ ≥ 0 supported on
        // the active set. Project the free components out and check.
        let rs = RowSpace::of(sys.matrix(), default_rank_tolerance(sys.bond_count()));
        let free: Vec<usize> = (0..s.c.len()).filter(|&n| s.c[n] > 0.0).collect();
        let vf = rs.v.select_rows(free.iter());
        let cf = DVector::from_iterator(free.len(), free.iter().map(|&n| s.c[n]));
        let mu = vf.clone().svd(true, true).solve(&cf, 1e-12).unwrap();
        assert!((&vf * &mu - &cf).norm() <= 1e-10 * cf.norm());
        let lambda = s.c.clone() - &rs.v * &mu;
        for n in 0..s.c.len() {
            if s.c[n] == 0.0 {
                assert!(lambda[n] >= -1e-10 * s.c.amax(), "λ[{n}] = {}", lambda[n]);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn residual_invariance_and_bounds(
            material in prop::sample::select(Material::ALL.to_vec()),
            delta in prop::sample::select(vec![2.0, 3.0, 4.0]),
            kind in prop::sample::select(vec![InfluenceKind::Constant, InfluenceKind::Inverse, InfluenceKind::Hat]),
        ) {
            let sys = sphere_system(delta, kind, material);
            let opts = SolverOptions::default();
            let Ok(s) = constrained_min_norm(&sys, &opts) else { return Ok(()) };
            let c_ls = min_norm_least_squares(&sys, &opts);
            let r_ls = (sys.matrix() * &c_ls - sys.rhs()).norm();
            let recomputed = (sys.matrix() * &s.c - sys.rhs()).norm();
            prop_assert!((recomputed - s.residual_norm).abs() <= 1e-10 * recomputed.max(1e-300));
            prop_assert!((s.residual_norm - r_ls).abs() <= 1e-9 * sys.rhs().norm().max(r_ls));
            prop_assert!(s.c.min() >= -1e-12 * s.c.amax());
            prop_assert!(s.solution_norm + 1e-12 >= c_ls.norm());
        }

        #[test]
        fn raising_the_bound_never_shrinks_the_norm(l1 in 0.0f64..0.2, dl in 0.0f64..0.05) {
            let sys = sphere_system(3.0, InfluenceKind::Constant, Material::Pyroceram9608);
            let lo = constrained_min_norm(&sys, &SolverOptions::default().with_lower_bound(l1));
            let hi = constrained_min_norm(&sys, &SolverOptions::default().with_lower_bound(l1 + dl));
            if let (Ok(lo), Ok(hi)) = (lo, hi) {
                prop_assert!(hi.solution_norm >= lo.solution_norm * (1.0 - 1e-12));
            }
        }
    }
}
