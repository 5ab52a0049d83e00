//! Quasi-exact spectra.
//!
//! The Frobenius series becomes a degree-`n` polynomial when `nu = 2n` and
//! `a_{n+1} = 0`. With `nu` fixed the second condition is a polynomial
//! equation of degree `n + 1` in `theta`; each root fixes `varpi` through
//! `theta = 2 m mu / sqrt(m varpi)`, and each `varpi` is reached by two
//! cyclotron frequencies, `omega = 2(-Omega +/- sqrt(Omega^2 + varpi^2))`.

use std::fmt;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heun::{generate_coefficients, termination_check, HeunParams};
use crate::model::{ChannelParams, PhysicalConfig};
use crate::poly::horner;
use crate::scalar::{max_magnitude, Field, Real};
use crate::tridiag::SymTridiagonal;

/// Relative tolerance used when re-checking termination of an emitted line.
pub const TERMINATION_TOL: f64 = 1e-10;

/// [`TERMINATION_TOL`], widened for scalar types with less precision than `f64`.
pub fn termination_tolerance<T: Real>() -> T {
    T::lit(TERMINATION_TOL).max(T::epsilon() * T::lit(1e4))
}

/// `a_{n+1}` at `nu = 2n` as a polynomial in `theta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationPolynomial<T> {
    pub n: u32,
    pub gamma: T,
    /// `coeffs[j]` multiplies `theta^j`; degree `n + 1`.
    pub coeffs: Vec<T>,
}

impl<T: Field> TruncationPolynomial<T> {
    pub fn evaluate(&self, theta: &T) -> T {
        horner(&self.coeffs, theta)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn check_order<T: Field>(n: u32, gamma: &T) -> Result<()> {
    if n < 1 {
        return Err(Error::OutOfRange { field: "n", reason: "must be >= 1".into() });
    }
    if !gamma.is_finite_value() || *gamma < T::zero() {
        return Err(Error::OutOfRange { field: "gamma", reason: "must be finite and >= 0".into() });
    }
    Ok(())
}

/// Propagates the recurrence symbolically in `theta` with `nu = 2n`.
pub fn truncation_polynomial<T: Field>(n: u32, gamma: T) -> Result<TruncationPolynomial<T>> {
    check_order(n, &gamma)?;
    let two = T::from_int(2);
    let width = n as usize + 2;
    let zero_poly = || vec![T::zero(); width];
    // a_0 = 1, a_1 = -theta / (1 + 2 gamma)
    let mut prev = zero_poly();
    prev[0] = T::one();
    let mut cur = zero_poly();
    cur[1] = -T::one() / (T::one() + two.clone() * gamma.clone());
    for k in 0..n as usize {
        let denom = {
            let k2 = T::from_int(k as i64 + 2);
            k2.clone() * (k2 + two.clone() * gamma.clone())
        };
        let weight = T::from_int(2 * n as i64 - 2 * k as i64);
        let mut next = zero_poly();
        for j in 0..width {
            let mut value = -(weight.clone() * prev[j].clone());
            if j > 0 {
                value = value - cur[j - 1].clone();
            }
            next[j] = value / denom.clone();
        }
        prev = cur;
        cur = next;
    }
    Ok(TruncationPolynomial { n, gamma, coeffs: cur })
}

/// `(|a_{n+1}(theta)|, max_{k <= n+1} |a_k(theta)|)` at `nu = 2n`, evaluated
/// through the recurrence.
pub fn root_residual<T: Real>(n: u32, gamma: T, theta: T) -> Result<(T, T)> {
    let params = HeunParams::new(gamma, theta, T::from_int(2 * n as i64))?;
    let series = generate_coefficients(&params, n as usize + 1)?;
    let residual = Float::abs(series.coeffs[n as usize + 1]);
    Ok((residual, max_magnitude(&series.coeffs)))
}

/// `a_{n+1}` and `d a_{n+1} / d theta` at `nu = 2n`.
fn recurrence_value_and_slope<T: Real>(n: u32, gamma: T, theta: T) -> (T, T) {
    let two = T::lit(2.0);
    let p1 = T::one() + two * gamma;
    let (mut a_prev, mut a_cur) = (T::one(), -theta / p1);
    let (mut d_prev, mut d_cur) = (T::zero(), -T::one() / p1);
    for k in 0..n as usize {
        let kf = T::from_int(k as i64);
        let denom = (kf + two) * (kf + two + two * gamma);
        let weight = T::from_int(2 * n as i64) - two * kf;
        let a_next = -(theta * a_cur + weight * a_prev) / denom;
        let d_next = -(a_cur + theta * d_cur + weight * d_prev) / denom;
        a_prev = a_cur;
        a_cur = a_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    (a_cur, d_cur)
}

/// All real roots of the truncation polynomial, ascending.
///
/// The truncation condition is the eigenvalue problem of an `(n+1)`-square
/// tridiagonal matrix with zero diagonal whose off-diagonal products
/// `(j+1)(j+1+2 gamma)(2n-2j)` are positive, so all `n + 1` roots are real,
/// simple and symmetric about zero. They are located by Sturm bisection on the
/// symmetrized matrix and polished with Newton steps on the recurrence.
pub fn theta_roots<T: Real>(poly: &TruncationPolynomial<T>) -> Result<Vec<T>> {
    let n = poly.n;
    let gamma = poly.gamma;
    check_order(n, &gamma)?;
    let size = n as usize + 1;
    let two = T::lit(2.0);
    let off: Vec<T> = (0..n as usize)
        .map(|j| {
            let j1 = T::from_int(j as i64 + 1);
            (j1 * (j1 + two * gamma) * T::from_int(2 * (n as i64 - j as i64))).sqrt()
        })
        .collect();
    let matrix = SymTridiagonal::new(vec![T::zero(); size], off)?;

    // positive half; zero is a root exactly when n + 1 is odd
    let first_positive = size / 2 + size % 2;
    let mut positive = Vec::with_capacity(size / 2);
    for index in first_positive..size {
        let mut theta = matrix.eigenvalue(index)?;
        let (mut value, _) = recurrence_value_and_slope(n, gamma, theta);
        for _ in 0..4 {
            let (_, slope) = recurrence_value_and_slope(n, gamma, theta);
            if slope.is_zero() {
                break;
            }
            let candidate = theta - value / slope;
            let (candidate_value, _) = recurrence_value_and_slope(n, gamma, candidate);
            if Float::abs(candidate_value) < Float::abs(value) {
                theta = candidate;
                value = candidate_value;
            } else {
                break;
            }
        }
        positive.push(theta);
    }
    let mut roots: Vec<T> = positive.iter().rev().map(|r| -*r).collect();
    if size % 2 == 1 {
        roots.push(T::zero());
    }
    roots.extend(positive);
    Ok(roots)
}

/// Which of the two cyclotron frequencies sharing one `varpi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `omega = 2(-Omega + sqrt(Omega^2 + varpi^2))`, always positive.
    Plus,
    /// `omega = 2(-Omega - sqrt(Omega^2 + varpi^2))`, always negative.
    Minus,
}

impl Branch {
    /// `+1` for plus, `-1` for minus.
    pub fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }

    /// Cyclotron frequency on this branch for a given `varpi`, evaluated
    /// without cancellation.
    pub fn frequency<T: Real>(self, rotation: T, varpi: T) -> T {
        let two = T::lit(2.0);
        let s = rotation.hypot(varpi);
        let v2 = varpi * varpi;
        match self {
            // s - Omega = varpi^2 / (s + Omega)
            Branch::Plus if rotation > T::zero() => two * v2 / (s + rotation),
            Branch::Plus => two * (s - rotation),
            // -(s + Omega) = -varpi^2 / (s - Omega)
            Branch::Minus if rotation < T::zero() => -two * v2 / (s - rotation),
            Branch::Minus => -two * (s + rotation),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

/// Branch filter for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSelection {
    #[default]
    Plus,
    Minus,
    Both,
}

impl BranchSelection {
    pub fn includes(self, branch: Branch) -> bool {
        match self {
            BranchSelection::Both => true,
            BranchSelection::Plus => branch == Branch::Plus,
            BranchSelection::Minus => branch == Branch::Minus,
        }
    }
}

/// One quasi-exact solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLine<T> {
    pub n: u32,
    pub l: i64,
    #[serde(rename = "branch")]
    pub omega_branch: Branch,
    #[serde(rename = "theta")]
    pub theta_root: T,
    pub varpi: T,
    pub omega: T,
    pub energy: T,
    /// Termination re-checked on the regenerated series.
    pub terminated: bool,
}

impl<T: Real> SpectrumLine<T> {
    pub fn channel(&self, config: &PhysicalConfig<T>) -> Result<ChannelParams<T>> {
        ChannelParams::with_varpi(config, self.l, self.omega, self.varpi)
    }
}

/// The three terms of `E = varpi (n + gamma + 1) - omega l / 2 - Omega l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyTerms<T> {
    /// `varpi (n + gamma + 1)`.
    pub oscillator: T,
    /// `-omega l / 2`.
    pub cyclotron: T,
    /// `-Omega l`, the rotation-angular momentum coupling.
    pub page_werner: T,
}

impl<T: Real> EnergyTerms<T> {
    pub fn total(&self) -> T {
        self.oscillator + self.cyclotron + self.page_werner
    }

    /// Sum of magnitudes, the natural scale for comparing energies.
    pub fn magnitude(&self) -> T {
        self.oscillator.abs() + self.cyclotron.abs() + self.page_werner.abs()
    }
}

pub fn energy_terms<T: Real>(n: u32, ch: &ChannelParams<T>) -> EnergyTerms<T> {
    let l = T::from_int(ch.l);
    EnergyTerms {
        oscillator: ch.varpi * (T::from_int(n as i64) + ch.gamma + T::one()),
        cyclotron: -ch.omega * l / T::lit(2.0),
        page_werner: -ch.rotation * l,
    }
}

/// `E = varpi (n + gamma + 1) - omega l / 2 - Omega l`.
pub fn energy_level<T: Real>(n: u32, ch: &ChannelParams<T>) -> T {
    energy_terms(n, ch).total()
}

fn line_for<T: Real>(
    n: u32,
    l: i64,
    config: &PhysicalConfig<T>,
    theta_root: T,
    varpi: T,
    branch: Branch,
) -> Result<SpectrumLine<T>> {
    let omega = branch.frequency(config.rotation, varpi);
    let ch = ChannelParams::with_varpi(config, l, omega, varpi)?;
    let params = HeunParams::new(ch.gamma, ch.theta, T::from_int(2 * n as i64))?;
    let series = generate_coefficients(&params, n as usize + 2)?;
    Ok(SpectrumLine {
        n,
        l,
        omega_branch: branch,
        theta_root,
        varpi,
        omega,
        energy: energy_level(n, &ch),
        terminated: termination_check(&series, n as usize, termination_tolerance()),
    })
}

/// Every quasi-exact solution for `(n, l)`: one pair of lines (plus, minus)
/// per positive `theta` root, ordered by root.
pub fn allowed_frequencies<T: Real>(n: u32, l: i64, config: &PhysicalConfig<T>) -> Result<Vec<SpectrumLine<T>>> {
    config.validate()?;
    let mu = config.kratzer.mu;
    if !(mu > T::zero()) {
        return Err(Error::NoAdmissibleRoot { n, l });
    }
    let gamma = config.gamma(l);
    let roots = theta_roots(&truncation_polynomial(n, gamma)?)?;
    let m = config.effective_mass();
    let mut lines = Vec::new();
    for theta in roots.into_iter().filter(|t| *t > T::zero()) {
        let varpi = T::lit(4.0) * m * mu * mu / (theta * theta);
        for branch in [Branch::Plus, Branch::Minus] {
            let line = line_for(n, l, config, theta, varpi, branch)?;
            let v2 = line.omega * line.omega / T::lit(4.0) + config.rotation * line.omega;
            debug_assert!(v2 > T::zero(), "branch frequency must stay confining");
            lines.push(line);
        }
    }
    if lines.is_empty() {
        return Err(Error::NoAdmissibleRoot { n, l });
    }
    Ok(lines)
}

/// The `n = 1` line from closed forms: `theta^2 = 2(1 + 2 gamma)`,
/// `varpi = 2 m mu^2 / (1 + 2 gamma)` and
/// `E = varpi (gamma + 2) -/+ l sqrt(Omega^2 + varpi^2)` (upper sign on the
/// plus branch).
///
/// Written as `Omega l sqrt(1 + 4 m^2 mu^4 / (Omega^2 (1 + 2 gamma)^2))` the
/// last term needs `(1 + 2 gamma)` squared under the radical; with a single
/// power `a_2` does not vanish. The form used here stays finite at
/// `Omega = 0` and keeps the branch labels continuous through it.
pub fn ground_state_closed_form<T: Real>(l: i64, config: &PhysicalConfig<T>, branch: Branch) -> Result<SpectrumLine<T>> {
    config.validate()?;
    let mu = config.kratzer.mu;
    if !(mu > T::zero()) {
        return Err(Error::NoAdmissibleRoot { n: 1, l });
    }
    let two = T::lit(2.0);
    let m = config.effective_mass();
    let gamma = config.gamma(l);
    let p1 = T::one() + two * gamma;
    let theta = (two * p1).sqrt();
    let varpi = two * m * mu * mu / p1;
    let rotation = config.rotation;
    let radical = (rotation * rotation + T::lit(4.0) * m * m * mu * mu * mu * mu / (p1 * p1)).sqrt();
    let energy = two * m * mu * mu * (gamma + two) / p1 - branch.sign::<T>() * T::from_int(l) * radical;
    let mut line = line_for(1, l, config, theta, varpi, branch)?;
    line.energy = energy;
    Ok(line)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::channel_params;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn worked(rotation: f64) -> PhysicalConfig<f64> {
        PhysicalConfig::from_effective(1.0, rotation, 1.0, 0.0).unwrap()
    }

    #[test]
    fn first_order_polynomial_is_exact() {
        // a_2 = theta^2 / (2(2+2g)(1+2g)) - 2 / (2(2+2g))
        let p = truncation_polynomial(1, rat(0, 1)).unwrap();
        assert_eq!(p.coeffs, vec![rat(-1, 2), rat(0, 1), rat(1, 4)]);
        let p = truncation_polynomial(1, rat(1, 1)).unwrap();
        assert_eq!(p.coeffs, vec![rat(-1, 4), rat(0, 1), rat(1, 24)]);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn polynomial_matches_recurrence() {
        let p = truncation_polynomial(2, 0.0).unwrap();
        let s = generate_coefficients(&HeunParams::new(0.0, 1.0, 4.0).unwrap(), 3).unwrap();
        assert!((p.evaluate(&1.0) - s.coeffs[3]).abs() < 1e-15);
        for n in 1..8u32 {
            let p = truncation_polynomial(n, 0.75).unwrap();
            for theta in [-2.5, -0.3, 0.9, 3.7] {
                let s = generate_coefficients(&HeunParams::new(0.75, theta, 2.0 * n as f64).unwrap(), n as usize + 1)
                    .unwrap();
                let a = s.coeffs[n as usize + 1];
                assert!((p.evaluate(&theta) - a).abs() <= 1e-12 * a.abs().max(1e-12), "n={n} theta={theta}");
            }
        }
    }

    #[test]
    fn parity_of_polynomial() {
        for n in 1..=10u32 {
            let p = truncation_polynomial(n, rat(3, 2)).unwrap();
            assert_eq!(p.degree(), n as usize + 1);
            for (j, c) in p.coeffs.iter().enumerate() {
                if (j + n as usize + 1) % 2 == 1 {
                    assert_eq!(*c, rat(0, 1), "n={n} j={j}");
                } else {
                    assert_ne!(*c, rat(0, 1), "n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn first_order_roots() {
        let roots = theta_roots(&truncation_polynomial(1, 1.0).unwrap()).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[1] - 6f64.sqrt()).abs() < 1e-15);
        assert_eq!(roots[0], -roots[1]);
        let roots = theta_roots(&truncation_polynomial(1, 0.0).unwrap()).unwrap();
        assert!((roots[1] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn roots_are_symmetric_and_polished() {
        for n in 1..=20u32 {
            for gamma in [0.0, 0.4, 1.0, 3.3] {
                let poly = truncation_polynomial(n, gamma).unwrap();
                let roots = theta_roots(&poly).unwrap();
                assert_eq!(roots.len(), n as usize + 1);
                assert!(roots.windows(2).all(|w| w[0] < w[1]));
                for (a, b) in roots.iter().zip(roots.iter().rev()) {
                    assert_eq!(*a, -*b);
                }
                for theta in roots {
                    let (res, scale) = root_residual(n, gamma, theta).unwrap();
                    assert!(res <= 1e-12 * scale, "n={n} gamma={gamma} theta={theta}: {res} vs {scale}");
                }
            }
        }
    }

    #[test]
    fn worked_ground_states() {
        let config = worked(1.0);
        let lines = allowed_frequencies(1, 0, &config).unwrap();
        assert_eq!(lines.len(), 2);
        let plus = lines[0];
        assert_eq!(plus.omega_branch, Branch::Plus);
        assert!((plus.varpi - 2.0).abs() < 1e-14);
        assert!((plus.omega - 2.0 * (-1.0 + 5f64.sqrt())).abs() < 1e-14);
        assert!((plus.omega - 2.4721360).abs() < 1e-7);
        assert!((plus.energy - 4.0).abs() < 1e-14);
        assert!(plus.terminated);

        let plus = allowed_frequencies(1, 1, &config).unwrap()[0];
        assert!((plus.varpi - 2.0 / 3.0).abs() < 1e-15);
        assert!((plus.omega - 2.0 * (-1.0 + 13f64.sqrt() / 3.0)).abs() < 1e-14);
        assert!((plus.omega - 0.4037009).abs() < 1e-7);
        assert!((plus.energy - (2.0 - 13f64.sqrt() / 3.0)).abs() < 1e-14);

        // no rotation: omega = 2 varpi = 4
        let lines = allowed_frequencies(1, 0, &worked(0.0)).unwrap();
        assert!((lines[0].omega - 4.0).abs() < 1e-14);
        assert!((lines[1].omega + 4.0).abs() < 1e-14);
    }

    #[test]
    fn branches_share_varpi() {
        let config = PhysicalConfig::from_effective(1.7, -0.6, 0.9, 0.35).unwrap();
        for n in 1..=4 {
            let lines = allowed_frequencies(n, 2, &config).unwrap();
            for pair in lines.chunks(2) {
                let (p, m) = (pair[0], pair[1]);
                assert_eq!(p.varpi, m.varpi);
                assert!(p.omega > 0.0 && m.omega < 0.0);
                let cp = p.channel(&config).unwrap();
                let cm = m.channel(&config).unwrap();
                let radial = p.varpi * (n as f64 + cp.gamma + 1.0);
                assert!((p.energy + cp.omega * 2.0 / 2.0 + cp.rotation * 2.0 - radial).abs() < 1e-12 * radial);
                assert!((m.energy + cm.omega * 2.0 / 2.0 + cm.rotation * 2.0 - radial).abs() < 1e-12 * radial);
                for line in pair {
                    let v2 = line.omega * line.omega / 4.0 + config.rotation * line.omega;
                    assert!((v2 - line.varpi * line.varpi).abs() < 1e-12 * v2.max(1.0));
                }
            }
        }
    }

    #[test]
    fn energy_level_examples() {
        let config = PhysicalConfig::from_effective(1.0, 0.0, 1.0, 0.4).unwrap();
        let ch = channel_params(&config, 0, 3.0).unwrap();
        assert!((energy_level(2, &ch) - 1.5 * (3.0 + ch.gamma)).abs() < 1e-15);

        let config = worked(1.0);
        let e_plus = allowed_frequencies(1, 1, &config).unwrap()[0].energy;
        let e_minus = allowed_frequencies(1, -1, &config).unwrap()[0].energy;
        assert!((e_plus - 0.7981496).abs() < 1e-7);
        assert!((e_plus - e_minus).abs() > 0.1);
    }

    #[test]
    fn closed_form_examples() {
        let line = ground_state_closed_form(0, &worked(1.0), Branch::Plus).unwrap();
        assert!((line.energy - 4.0).abs() < 1e-15);
        let line = ground_state_closed_form(1, &worked(1.0), Branch::Plus).unwrap();
        assert!((line.energy - (2.0 - 13f64.sqrt() / 3.0)).abs() < 1e-15);
        // Omega -> 0 is regular and matches the general formula at Omega = 0
        let at_zero = ground_state_closed_form(1, &worked(0.0), Branch::Plus).unwrap();
        let general = allowed_frequencies(1, 1, &worked(0.0)).unwrap()[0];
        assert!(at_zero.energy.is_finite());
        assert!((at_zero.energy - general.energy).abs() < 1e-14);
        let tiny = ground_state_closed_form(1, &worked(1e-12), Branch::Plus).unwrap();
        assert!((tiny.energy - at_zero.energy).abs() < 1e-10);
    }

    #[test]
    fn frequency_depends_on_quantum_numbers() {
        let config = worked(1.0);
        let w0 = allowed_frequencies(1, 0, &config).unwrap()[0].omega;
        let w1 = allowed_frequencies(1, 1, &config).unwrap()[0].omega;
        let w2 = allowed_frequencies(2, 0, &config).unwrap()[0].omega;
        assert!((w0 - w1).abs() > 1e-3);
        assert!((w0 - w2).abs() > 1e-3);
    }

    #[test]
    fn no_admissible_root_without_coulomb_term() {
        let config = PhysicalConfig::from_effective(1.0, 1.0, 0.0, 0.5).unwrap();
        assert_eq!(allowed_frequencies(1, 0, &config), Err(Error::NoAdmissibleRoot { n: 1, l: 0 }));
        assert!(allowed_frequencies(0, 0, &worked(1.0)).is_err());
    }

    #[test]
    fn branch_frequencies_are_stable() {
        for rotation in [-1e8, -3.0, -1e-9, 0.0, 1e-9, 3.0, 1e8] {
            for varpi in [1e-6, 0.3, 5.0] {
                let p = Branch::Plus.frequency(rotation, varpi);
                let m = Branch::Minus.frequency(rotation, varpi);
                assert!(p > 0.0 && m < 0.0);
                for w in [p, m] {
                    let v2 = w / 2.0 * (w / 2.0 + 2.0 * rotation);
                    let tol = 1e-12 * (w * w / 4.0).max((rotation * w).abs());
                    assert!((v2 - varpi * varpi).abs() <= tol.max(1e-14 * varpi * varpi));
                }
            }
        }
    }

    #[test]
    fn single_precision_pipeline() {
        let config = PhysicalConfig::<f32>::from_effective(1.0, 1.0, 1.0, 0.0).unwrap();
        let line = allowed_frequencies(1, 0, &config).unwrap()[0];
        assert!((line.energy - 4.0).abs() < 1e-5);
        assert!(line.terminated);
    }
}
