//! Finite-difference check of quasi-exact levels.
//!
//! With `u = sqrt(r) f` the radial problem becomes
//! `-u'' + [(gamma^2 - 1/4)/r^2 + r^2 - theta/r] u = lambda u`, and a
//! terminated series at degree `n` claims the eigenvalue
//! `lambda = 2n + 2 + 2 gamma`. The operator is truncated to `(0, r_max)`
//! with Dirichlet walls and discretized as a symmetric tridiagonal matrix.
//!
//! [`Discretization::FiniteVolume`] works with `g = f / r^gamma`, whose
//! operator is `-(r^(2g+1) g')' / r^(2g+1) + (r^2 - theta/r) g`, on cells
//! centred at `r_i = (i + 1/2) h`. The centrifugal term is absorbed into the
//! weight, so it converges at second order for every `gamma >= 0`.
//! [`Discretization::ThreePoint`] is the plain three-point Laplacian in `u`;
//! it loses accuracy for `gamma < 1/2`.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{channel_params, nu_from_energy, PhysicalConfig};
use crate::scalar::Real;
use crate::spectrum::{allowed_frequencies, Branch, SpectrumLine};
use crate::tridiag::SymTridiagonal;
use crate::wavefunction::{radial_wavefunction, RadialFunction};

pub const DEFAULT_R_MAX: f64 = 12.0;
pub const DEFAULT_GRID_POINTS: usize = 4000;
pub const MIN_GRID_POINTS: usize = 100;

/// Largest eigenvalue count accepted by [`lowest_eigenvalues`].
pub const MAX_EIGENVALUES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid<T> {
    pub r_max: T,
    /// Number of interior unknowns.
    pub points: usize,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(r_max: T, points: usize) -> Result<Self> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(Error::OutOfRange { field: "r_max", reason: "must be finite and > 0".into() });
        }
        if points < MIN_GRID_POINTS {
            return Err(Error::OutOfRange { field: "N", reason: format!("must be >= {MIN_GRID_POINTS}") });
        }
        Ok(Self { r_max, points })
    }

    pub fn refined(&self) -> Self {
        Self { r_max: self.r_max, points: 2 * self.points }
    }

    /// Cell width of the finite-volume grid; the wall sits half a cell past the last centre.
    pub fn spacing(&self) -> T {
        self.r_max / (T::from_int(self.points as i64) + T::lit(0.5))
    }

    pub fn abscissae(&self, scheme: Discretization) -> Vec<T> {
        match scheme {
            Discretization::FiniteVolume => {
                let h = self.spacing();
                (0..self.points).map(|i| (T::from_int(i as i64) + T::lit(0.5)) * h).collect()
            }
            Discretization::ThreePoint => {
                let h = self.r_max / T::from_int(self.points as i64 + 1);
                (1..=self.points).map(|i| T::from_int(i as i64) * h).collect()
            }
        }
    }
}

impl Default for RadialGrid<f64> {
    fn default() -> Self {
        Self { r_max: DEFAULT_R_MAX, points: DEFAULT_GRID_POINTS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Discretization {
    #[default]
    FiniteVolume,
    ThreePoint,
}

fn validate_potential<T: Real>(gamma: T, theta: T) -> Result<()> {
    if !gamma.is_finite() || !theta.is_finite() {
        return Err(Error::NonFinite { field: "gamma/theta" });
    }
    if gamma < T::zero() {
        return Err(Error::OutOfRange { field: "gamma", reason: "must be >= 0".into() });
    }
    Ok(())
}

/// Symmetric matrix of the dimensionless radial operator.
pub fn radial_operator<T: Real>(
    gamma: T,
    theta: T,
    grid: &RadialGrid<T>,
    scheme: Discretization,
) -> Result<SymTridiagonal<T>> {
    validate_potential(gamma, theta)?;
    match scheme {
        Discretization::FiniteVolume => finite_volume(gamma, theta, grid),
        Discretization::ThreePoint => three_point(gamma, theta, grid),
    }
}

/// [`radial_operator`] with the default finite-volume scheme.
pub fn dimensionless_operator<T: Real>(gamma: T, theta: T, grid: &RadialGrid<T>) -> Result<SymTridiagonal<T>> {
    radial_operator(gamma, theta, grid, Discretization::FiniteVolume)
}

fn finite_volume<T: Real>(gamma: T, theta: T, grid: &RadialGrid<T>) -> Result<SymTridiagonal<T>> {
    let n = grid.points;
    let h = grid.spacing();
    let h2 = h * h;
    let p = T::lit(2.0) * gamma + T::lit(2.0);
    // logs keep r^(2 gamma + 1) representable for large gamma
    let log_face = |j: usize| (p - T::one()) * (T::from_int(j as i64) * h).ln();
    let log_mass: Vec<T> = (0..n)
        .map(|i| {
            let a = T::from_int(i as i64) * h;
            let b = a + h;
            let ratio = (a / b).powf(p);
            p * b.ln() + (-ratio).ln_1p() - (p * h).ln()
        })
        .collect();
    let centres = grid.abscissae(Discretization::FiniteVolume);
    let diag = (0..n)
        .map(|i| {
            let right = (log_face(i + 1) - log_mass[i]).exp();
            let left = if i == 0 { T::zero() } else { (log_face(i) - log_mass[i]).exp() };
            let r = centres[i];
            (left + right) / h2 + r * r - theta / r
        })
        .collect();
    let off = (0..n - 1)
        .map(|i| -(log_face(i + 1) - (log_mass[i] + log_mass[i + 1]) / T::lit(2.0)).exp() / h2)
        .collect();
    SymTridiagonal::new(diag, off)
}

fn three_point<T: Real>(gamma: T, theta: T, grid: &RadialGrid<T>) -> Result<SymTridiagonal<T>> {
    let n = grid.points;
    let h = grid.r_max / T::from_int(n as i64 + 1);
    let h2 = h * h;
    let centrifugal = gamma * gamma - T::lit(0.25);
    let diag = grid
        .abscissae(Discretization::ThreePoint)
        .into_iter()
        .map(|r| T::lit(2.0) / h2 + centrifugal / (r * r) + r * r - theta / r)
        .collect();
    SymTridiagonal::new(diag, vec![-T::one() / h2; n - 1])
}

/// The `count` smallest eigenvalues of the dimensionless operator, ascending.
pub fn lowest_eigenvalues<T: Real>(gamma: T, theta: T, grid: &RadialGrid<T>, count: usize) -> Result<Vec<T>> {
    if count == 0 || count > MAX_EIGENVALUES {
        return Err(Error::OutOfRange { field: "count", reason: format!("must be in 1..={MAX_EIGENVALUES}") });
    }
    dimensionless_operator(gamma, theta, grid)?.lowest_eigenvalues(count)
}

/// Pass/fail thresholds on the eigenvalue gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleTolerance {
    /// Largest gap on the base grid.
    pub coarse: f64,
    /// Largest gap on the doubled grid.
    pub fine: f64,
    /// Beyond this on both grids there is no eigenvalue near the claim.
    pub nearby: f64,
}

impl Default for OracleTolerance {
    fn default() -> Self {
        Self { coarse: 1e-2, fine: 2.5e-3, nearby: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleStatus {
    Passed,
    GapTooLarge,
    NoNearbyEigenvalue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport<T> {
    pub n: u32,
    pub l: i64,
    pub theta: T,
    pub gamma: T,
    pub lambda_analytic: T,
    /// Nearest eigenvalue on the refined grid.
    pub lambda_numeric: T,
    /// Gap on the refined grid.
    pub abs_gap: T,
    /// Gap on the base grid.
    pub coarse_gap: T,
    pub gap_ratio: T,
    /// Sign changes of the refined eigenvector.
    pub node_count_numeric: usize,
    pub node_count_analytic: usize,
    /// `|<u_numeric, sqrt(r) f>|` with both vectors normalized on the refined grid.
    pub overlap: T,
    pub grid: RadialGrid<T>,
    pub refined: RadialGrid<T>,
    pub scheme: Discretization,
    pub status: OracleStatus,
    pub passed: bool,
}

/// Eigenvalue of `matrix` closest to `target`.
fn nearest_eigenvalue<T: Real>(matrix: &SymTridiagonal<T>, target: T) -> Result<T> {
    let below = matrix.count_below(target);
    let mut best: Option<T> = None;
    for index in [below.checked_sub(1), Some(below)].into_iter().flatten() {
        if index >= matrix.dim() {
            continue;
        }
        let lambda = matrix.eigenvalue(index)?;
        if best.is_none_or(|b| Float::abs(lambda - target) < Float::abs(b - target)) {
            best = Some(lambda);
        }
    }
    best.ok_or(Error::BracketFailure { index: below, reason: "empty spectrum".into() })
}

fn sign_changes<T: Real>(v: &[T]) -> usize {
    let peak = v.iter().fold(T::zero(), |m, x| m.max(Float::abs(*x)));
    let threshold = peak * T::lit(1e-8);
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for x in v.iter().filter(|x| Float::abs(**x) > threshold) {
        let positive = *x > T::zero();
        if last.is_some_and(|p| p != positive) {
            changes += 1;
        }
        last = Some(positive);
    }
    changes
}

fn overlap<T: Real>(numeric: &[T], profile: &RadialFunction<T>, abscissae: &[T]) -> T {
    let reference: Vec<T> = abscissae.iter().map(|r| r.sqrt() * profile.value(*r)).collect();
    let dot = numeric.iter().zip(&reference).fold(T::zero(), |s, (a, b)| s + *a * *b);
    let na = numeric.iter().fold(T::zero(), |s, a| s + *a * *a).sqrt();
    let nb = reference.iter().fold(T::zero(), |s, b| s + *b * *b).sqrt();
    Float::abs(dot) / (na * nb)
}

/// Checks a claimed eigenvalue `lambda` of the operator with parameters
/// `(gamma, theta)` on `grid` and on the doubled grid.
pub fn check_eigenvalue<T: Real>(
    profile: &RadialFunction<T>,
    theta: T,
    lambda: T,
    grid: &RadialGrid<T>,
    scheme: Discretization,
    tolerance: &OracleTolerance,
) -> Result<OracleReport<T>> {
    let gamma = profile.gamma;
    if grid.r_max * grid.r_max < lambda + T::lit(20.0) {
        return Err(Error::OutOfRange {
            field: "r_max",
            reason: format!("r_max^2 must be >= lambda + 20 = {}", lambda + T::lit(20.0)),
        });
    }
    let coarse_matrix = radial_operator(gamma, theta, grid, scheme)?;
    let coarse_gap = Float::abs(nearest_eigenvalue(&coarse_matrix, lambda)? - lambda);
    drop(coarse_matrix);

    let refined = grid.refined();
    let fine_matrix = radial_operator(gamma, theta, &refined, scheme)?;
    let lambda_numeric = nearest_eigenvalue(&fine_matrix, lambda)?;
    let abs_gap = Float::abs(lambda_numeric - lambda);
    let vector = fine_matrix.eigenvector(lambda_numeric);
    let abscissae = refined.abscissae(scheme);

    let nearby = T::lit(tolerance.nearby);
    let status = if coarse_gap > nearby && abs_gap > nearby {
        OracleStatus::NoNearbyEigenvalue
    } else if coarse_gap < T::lit(tolerance.coarse) && abs_gap < T::lit(tolerance.fine) {
        OracleStatus::Passed
    } else {
        OracleStatus::GapTooLarge
    };
    Ok(OracleReport {
        n: profile.n,
        l: profile.l,
        theta,
        gamma,
        lambda_analytic: lambda,
        lambda_numeric,
        abs_gap,
        coarse_gap,
        gap_ratio: coarse_gap / abs_gap.max(T::min_positive_value()),
        node_count_numeric: sign_changes(&vector),
        node_count_analytic: profile.nodes().len(),
        overlap: overlap(&vector, profile, &abscissae),
        grid: *grid,
        refined,
        scheme,
        status,
        passed: status == OracleStatus::Passed,
    })
}

/// Verifies an emitted line. With `omega_override` the operator is built at
/// that cyclotron frequency instead, while the claimed energy stays fixed;
/// this is the negative control and is expected to fail.
pub fn verify_line<T: Real>(
    line: &SpectrumLine<T>,
    config: &PhysicalConfig<T>,
    grid: &RadialGrid<T>,
    omega_override: Option<T>,
) -> Result<OracleReport<T>> {
    verify_line_with(line, config, grid, omega_override, Discretization::default(), &OracleTolerance::default())
}

pub fn verify_line_with<T: Real>(
    line: &SpectrumLine<T>,
    config: &PhysicalConfig<T>,
    grid: &RadialGrid<T>,
    omega_override: Option<T>,
    scheme: Discretization,
    tolerance: &OracleTolerance,
) -> Result<OracleReport<T>> {
    let profile = radial_wavefunction(line, config)?;
    let (theta, lambda) = match omega_override {
        None => (line.theta_root, T::from_int(2 * line.n as i64 + 2) + T::lit(2.0) * profile.gamma),
        Some(omega) => {
            let ch = channel_params(config, line.l, omega)?;
            (ch.theta, ch.lambda_from_nu(nu_from_energy(&ch, line.energy)))
        }
    };
    check_eigenvalue(&profile, theta, lambda, grid, scheme, tolerance)
}

/// Verifies every positive-branch level of radial degree `n` in channel `l`.
pub fn verify_quasi_exact<T: Real>(
    n: u32,
    l: i64,
    config: &PhysicalConfig<T>,
    grid: &RadialGrid<T>,
) -> Result<Vec<OracleReport<T>>> {
    allowed_frequencies(n, l, config)?
        .iter()
        .filter(|line| line.omega_branch == Branch::Plus)
        .map(|line| verify_line(line, config, grid, None))
        .collect()
}
