//! Radial bound states `f(r) = exp(-r^2/2) r^gamma H(r)` in the dimensionless
//! coordinate `r = sqrt(m varpi) rho`.
//!
//! The full solution carries the phase `exp(-i E t) exp(i l phi)`; only the
//! radial profile is represented. Profiles keep the `a_0 = 1` normalization.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heun::{generate_coefficients, termination_check, HeunParams, HeunSeries};
use crate::model::PhysicalConfig;
use crate::poly::{count_positive_roots, positive_roots};
use crate::scalar::Real;
use crate::spectrum::{termination_tolerance, SpectrumLine};

/// Default sampling range in `r`.
pub const DEFAULT_R_MAX: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction<T> {
    pub n: u32,
    pub l: i64,
    pub gamma: T,
    pub theta: T,
    /// `a_0 ..= a_n` of the terminated series.
    pub poly: HeunSeries<T>,
}

impl<T: Real> RadialFunction<T> {
    /// Builds the profile for parameters whose series terminates at degree `n`.
    pub fn from_params(n: u32, l: i64, params: HeunParams<T>) -> Result<Self> {
        let series = generate_coefficients(&params, n as usize + 2)?;
        if !termination_check(&series, n as usize, termination_tolerance()) {
            return Err(Error::NotTerminated { n });
        }
        Ok(Self { n, l, gamma: params.gamma, theta: params.theta, poly: series.truncated(n as usize) })
    }

    /// `H(r)`.
    pub fn polynomial(&self, r: T) -> T {
        self.poly.evaluate(r)
    }

    /// `f(r)`.
    pub fn value(&self, r: T) -> T {
        let envelope = (-r * r / T::lit(2.0)).exp();
        let power = if self.gamma.is_zero() { T::one() } else { r.powf(self.gamma) };
        envelope * power * self.polynomial(r)
    }

    /// `samples` evenly spaced points on `[0, r_max]`, endpoints included.
    pub fn sample(&self, r_max: T, samples: usize) -> Result<Vec<(T, T)>> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(Error::OutOfRange { field: "r_max", reason: "must be finite and > 0".into() });
        }
        if samples == 0 {
            return Err(Error::OutOfRange { field: "samples", reason: "must be >= 1".into() });
        }
        if samples == 1 {
            return Ok(vec![(T::zero(), self.value(T::zero()))]);
        }
        let step = r_max / T::from_int(samples as i64 - 1);
        Ok((0..samples)
            .map(|i| {
                let r = if i + 1 == samples { r_max } else { step * T::from_int(i as i64) };
                (r, self.value(r))
            })
            .collect())
    }

    /// Positive zeros of `H`, ascending.
    pub fn nodes(&self) -> Vec<T> {
        positive_roots(&self.poly.coeffs)
    }
}

/// Profile of an emitted spectrum line.
pub fn radial_wavefunction<T: Real>(line: &SpectrumLine<T>, config: &PhysicalConfig<T>) -> Result<RadialFunction<T>> {
    if !line.terminated {
        return Err(Error::NotTerminated { n: line.n });
    }
    let gamma = config.gamma(line.l);
    let params = HeunParams::new(gamma, line.theta_root, T::from_int(2 * line.n as i64))?;
    RadialFunction::from_params(line.n, line.l, params)
}

/// Distinct strictly positive zeros of the polynomial part.
pub fn count_nodes<T: Real>(rf: &RadialFunction<T>) -> usize {
    count_positive_roots(&rf.poly.coeffs)
}

fn simpson<T: Real>(rf: &RadialFunction<T>, r_max: T, intervals: usize) -> T {
    let h = r_max / T::from_int(intervals as i64);
    let integrand = |r: T| {
        let f = rf.value(r);
        f * f * r
    };
    let mut sum = integrand(T::zero()) + integrand(r_max);
    for i in 1..intervals {
        let weight = if i % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
        sum = sum + weight * integrand(h * T::from_int(i as i64));
    }
    sum * h / T::lit(3.0)
}

/// `int_0^r_max |f|^2 r dr` by composite Simpson on `intervals` and then on
/// doubled grids until two successive estimates agree to `1e-8` relative.
pub fn norm_squared<T: Real>(rf: &RadialFunction<T>, r_max: T, intervals: usize) -> Result<T> {
    if !(r_max > T::zero()) || !r_max.is_finite() {
        return Err(Error::OutOfRange { field: "r_max", reason: "must be finite and > 0".into() });
    }
    if intervals < 1000 {
        return Err(Error::OutOfRange { field: "N", reason: "must be >= 1000".into() });
    }
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(1e3));
    let mut intervals = intervals + intervals % 2;
    let mut coarse = simpson(rf, r_max, intervals);
    let mut discrepancy = T::infinity();
    for _ in 0..8 {
        intervals *= 2;
        let fine = simpson(rf, r_max, intervals);
        discrepancy = Float::abs(fine - coarse) / Float::abs(fine).max(T::min_positive_value());
        if discrepancy <= tol {
            // Gaussian tail beyond r_max: roughly |f(r_max)|^2 / 2
            let edge = rf.value(r_max);
            if edge * edge > T::lit(1e-12) * fine {
                return Err(Error::OutOfRange {
                    field: "r_max",
                    reason: format!("profile not negligible at r_max = {r_max}"),
                });
            }
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::IntegralNotConverged {
        coarse: coarse.to_f64_lossy(),
        fine: simpson(rf, r_max, intervals).to_f64_lossy(),
        discrepancy: discrepancy.to_f64_lossy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{allowed_frequencies, Branch};

    fn worked() -> PhysicalConfig<f64> {
        PhysicalConfig::from_effective(1.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn ground_state_profile() {
        let line = allowed_frequencies(1, 1, &worked()).unwrap()[0];
        let rf = radial_wavefunction(&line, &worked()).unwrap();
        let theta = 6f64.sqrt();
        for i in 0..=100 {
            let r = i as f64 * 0.1;
            let expected = (-r * r / 2.0).exp() * r * (1.0 - theta * r / 3.0);
            assert!((rf.value(r) - expected).abs() < 1e-14);
        }
        assert_eq!(rf.value(0.0), 0.0);
        let nodes = rf.nodes();
        assert_eq!(nodes.len(), 1);
        assert!((nodes[0] - 1.2247449).abs() < 1e-7);
        assert!((nodes[0] - 3.0 / theta).abs() < 1e-15);
        assert_eq!(count_nodes(&rf), 1);
    }

    #[test]
    fn s_wave_is_finite_at_origin() {
        let line = allowed_frequencies(1, 0, &worked()).unwrap()[0];
        let rf = radial_wavefunction(&line, &worked()).unwrap();
        assert_eq!(rf.value(0.0), 1.0);
        assert_eq!(rf.sample(5.0, 1).unwrap(), vec![(0.0, 1.0)]);
    }

    #[test]
    fn refuses_non_terminated() {
        let mut line = allowed_frequencies(1, 0, &worked()).unwrap()[0];
        line.terminated = false;
        assert_eq!(radial_wavefunction(&line, &worked()), Err(Error::NotTerminated { n: 1 }));
        let off_root = HeunParams::new(0.0, 1.0, 2.0).unwrap();
        assert!(RadialFunction::from_params(1, 0, off_root).is_err());
    }

    #[test]
    fn sampling_endpoints() {
        let line = allowed_frequencies(1, 1, &worked()).unwrap()[0];
        let rf = radial_wavefunction(&line, &worked()).unwrap();
        let node = 3.0 / 6f64.sqrt();
        let samples = rf.sample(node, 3).unwrap();
        assert_eq!(samples.len(), 3);
        assert_eq!(samples[0], (0.0, 0.0));
        assert_eq!(samples[2].0, node);
        assert!(samples[2].1.abs() < 1e-15);
        assert!(rf.sample(0.0, 3).is_err());
        assert!(rf.sample(-1.0, 3).is_err());
        assert!(rf.sample(1.0, 0).is_err());
    }

    #[test]
    fn constant_polynomial_has_no_nodes() {
        let rf = RadialFunction::from_params(0, 0, HeunParams::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(count_nodes(&rf), 0);
        assert_eq!(rf.poly.coeffs, vec![1.0]);
    }

    #[test]
    fn gaussian_norm() {
        // int_0^inf exp(-r^2) r dr = 1/2
        let rf = RadialFunction::from_params(0, 0, HeunParams::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        let norm = norm_squared(&rf, 10.0, 1000).unwrap();
        assert!((norm - 0.5).abs() < 1e-10);
        assert!(norm_squared(&rf, 10.0, 999).is_err());
        assert!(norm_squared(&rf, 2.0, 1000).is_err());
    }

    #[test]
    fn norms_positive_and_stable() {
        for n in 1..=3 {
            for l in -2..=2 {
                for line in allowed_frequencies(n, l, &worked()).unwrap() {
                    if line.omega_branch != Branch::Plus {
                        continue;
                    }
                    let rf = radial_wavefunction(&line, &worked()).unwrap();
                    let a = norm_squared(&rf, 10.0, 1000).unwrap();
                    let b = norm_squared(&rf, 10.0, 2000).unwrap();
                    assert!(a > 0.0);
                    assert!((a - b).abs() <= 1e-8 * a);
                }
            }
        }
    }

    #[test]
    fn gaussian_decay_bound() {
        for n in 1..=3 {
            let line = allowed_frequencies(n, 2, &worked()).unwrap()[0];
            let rf = radial_wavefunction(&line, &worked()).unwrap();
            // |f(r)| exp(r^2/4) = exp(-r^2/4) r^gamma |H(r)| is bounded, and decreasing past r0
            let scaled = |r: f64| rf.value(r).abs() * (r * r / 4.0).exp();
            let r0 = 6.0;
            let c = scaled(r0);
            let mut r = r0;
            while r < 30.0 {
                assert!(scaled(r) <= c * (1.0 + 1e-12), "r = {r}");
                r *= 1.05;
            }
        }
    }
}
