//! Frobenius series of the biconfluent Heun equation
//!
//! ```text
//! H'' + ((2 gamma + 1)/r - 2r) H' + (nu + theta/r) H = 0
//! ```
//!
//! around the origin. With `H = sum a_k r^k` and `a_0 = 1` the coefficients
//! obey
//!
//! ```text
//! a_1     = -theta / (1 + 2 gamma)
//! a_{k+2} = -(theta a_{k+1} + (nu - 2k) a_k) / ((k + 2)(k + 2 + 2 gamma))
//! ```
//!
//! Everything here is generic over [`Field`], so the same code produces exact
//! rational coefficients when the parameters are rational.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{max_magnitude, Field, Real};

/// Parameters `(gamma, theta, nu)` of the equation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeunParams<T> {
    pub gamma: T,
    pub theta: T,
    pub nu: T,
}

impl<T: Field> HeunParams<T> {
    pub fn new(gamma: T, theta: T, nu: T) -> Result<Self> {
        let params = Self { gamma, theta, nu };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite_value() {
            return Err(Error::NonFinite { field: "gamma" });
        }
        if !self.theta.is_finite_value() {
            return Err(Error::NonFinite { field: "theta" });
        }
        if !self.nu.is_finite_value() {
            return Err(Error::NonFinite { field: "nu" });
        }
        if self.gamma < T::zero() {
            return Err(Error::OutOfRange { field: "gamma", reason: "must be >= 0".into() });
        }
        Ok(())
    }

    /// `(k + 2)(k + 2 + 2 gamma)`, the denominator producing `a_{k+2}`.
    fn denominator(&self, k: usize) -> T {
        let k2 = T::from_int(k as i64 + 2);
        k2.clone() * (k2 + T::from_int(2) * self.gamma.clone())
    }
}

/// Coefficients `a_0 ..= a_K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeunSeries<T> {
    pub params: HeunParams<T>,
    pub coeffs: Vec<T>,
}

impl<T: Field> HeunSeries<T> {
    /// Highest generated index `K`.
    pub fn max_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Keeps `a_0 ..= a_degree` only.
    pub fn truncated(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(degree + 1);
        Self { params: self.params.clone(), coeffs }
    }
}

impl<T: Real> HeunSeries<T> {
    /// Horner evaluation of the stored coefficients. Exact for a terminated
    /// series, a partial sum otherwise (see [`evaluate_h`]).
    pub fn evaluate(&self, r: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &a| acc * r + a)
    }

    /// `dH/dr` of the stored coefficients.
    pub fn evaluate_derivative(&self, r: T) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(T::zero(), |acc, (k, &a)| acc * r + T::from_int(k as i64) * a)
    }
}

/// Generates `a_0 ..= a_K` with `a_0 = 1`.
pub fn generate_coefficients<T: Field>(params: &HeunParams<T>, max_index: usize) -> Result<HeunSeries<T>> {
    params.validate()?;
    if max_index < 1 {
        return Err(Error::OutOfRange { field: "K", reason: "must be >= 1".into() });
    }
    let two = T::from_int(2);
    let mut coeffs = Vec::with_capacity(max_index + 1);
    coeffs.push(T::one());
    let a1 = -params.theta.clone() / (T::one() + two.clone() * params.gamma.clone());
    if !a1.is_finite_value() {
        return Err(Error::CoefficientOverflow { index: 1 });
    }
    coeffs.push(a1);
    for k in 0..max_index - 1 {
        let weight = params.nu.clone() - two.clone() * T::from_int(k as i64);
        let next = -(params.theta.clone() * coeffs[k + 1].clone() + weight * coeffs[k].clone())
            / params.denominator(k);
        if !next.is_finite_value() {
            return Err(Error::CoefficientOverflow { index: k + 2 });
        }
        coeffs.push(next);
    }
    Ok(HeunSeries { params: params.clone(), coeffs })
}

/// Closed forms of `a_1`, `a_2` and `a_3` written out in terms of the parameters.
pub fn closed_form_low_coefficients<T: Field>(params: &HeunParams<T>) -> [T; 3] {
    let HeunParams { gamma, theta, nu } = params.clone();
    let int = |v: i64| T::from_int(v);
    let g2 = int(2) * gamma;
    let p1 = int(1) + g2.clone();
    let p2 = int(2) + g2.clone();
    let p3 = int(3) + g2;
    let theta2 = theta.clone() * theta.clone();
    let theta3 = theta2.clone() * theta.clone();

    let a1 = -theta.clone() / p1.clone();
    let a2 = theta2 / (int(2) * p2.clone() * p1.clone()) - nu.clone() / (int(2) * p2.clone());
    let a3 = -theta3 / (int(6) * p3.clone() * p2.clone() * p1.clone())
        + nu.clone() * theta.clone() / (int(6) * p3.clone() * p2)
        + (nu - int(2)) * theta / (int(3) * p3 * p1);
    [a1, a2, a3]
}

/// Whether the series truncates to a polynomial of degree `n`:
/// `nu = 2n` and both `a_{n+1}` and `a_{n+2}` vanish relative to the
/// largest generated coefficient.
pub fn termination_check<T: Field>(series: &HeunSeries<T>, n: usize, tol: T) -> bool {
    let regenerated;
    let series = if series.coeffs.len() < n + 3 {
        match generate_coefficients(&series.params, n + 2) {
            Ok(s) => {
                regenerated = s;
                &regenerated
            }
            Err(_) => return false,
        }
    } else {
        series
    };
    let one = T::one();
    let bound_scale = {
        let m = max_magnitude(&series.coeffs);
        if m > one {
            m
        } else {
            one.clone()
        }
    };
    let bound = tol.clone() * bound_scale;
    let target = T::from_int(2 * n as i64);
    let nu_scale = if target > one { target.clone() } else { one };
    let nu_ok = (series.params.nu.clone() - target).magnitude() <= tol * nu_scale;
    nu_ok && series.coeffs[n + 1].magnitude() <= bound && series.coeffs[n + 2].magnitude() <= bound
}

/// Evaluates `H(r) = sum a_k r^k` for arbitrary parameters.
///
/// Terms are summed until a rigorous geometric bound on the remaining tail
/// falls below `tol * max(|H|, 1)`. Fails with [`Error::NotConverged`] when
/// that does not happen within `max_terms` terms.
pub fn evaluate_h<T: Real>(params: &HeunParams<T>, r: T, tol: T, max_terms: usize) -> Result<T> {
    params.validate()?;
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::OutOfRange { field: "r", reason: "must be finite and >= 0".into() });
    }
    if r.is_zero() {
        return Ok(T::one());
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let theta_r = Float::abs(params.theta) * r;
    let slope = two * r * r;
    // c_j = (|theta| r + |nu - 2j| r^2) / ((j + 2)(j + 2 + 2 gamma)) bounds the
    // growth of |a_{j+2} r^{j+2}| against max(|a_j r^j|, |a_{j+1} r^{j+1}|).
    let offset = theta_r - params.nu * r * r;
    let vertex = -offset / slope;

    let mut prev = T::one(); // a_{k}
    let mut cur = -params.theta / (T::one() + two * params.gamma); // a_{k+1}
    let mut power = r; // r^{k+1}
    let mut sum = T::one() + cur * power;
    let mut last_bound = T::infinity();
    let mut k = 0usize;
    while k + 2 <= max_terms {
        let kf = T::from_int(k as i64);
        let term_k = Float::abs(prev) * power / r;
        let term_k1 = Float::abs(cur) * power;
        if !term_k1.is_finite() || !sum.is_finite() {
            return Err(Error::CoefficientOverflow { index: k + 1 });
        }
        if kf >= params.nu * half && kf >= vertex {
            let denom = params.denominator(k);
            let growth = (offset + slope * kf) / denom;
            // derivative of c_j is non-positive for all j >= k once this holds
            let two_gamma = two * params.gamma;
            let slope_check = slope * denom - (offset + slope * kf) * (two * kf + T::lit(4.0) + two_gamma);
            if growth < T::one() && slope_check <= T::zero() {
                let rho = term_k.max(term_k1);
                let tail = two * rho * growth / (T::one() - growth);
                last_bound = tail;
                if tail <= tol * Float::abs(sum).max(T::one()) {
                    return Ok(sum);
                }
            }
        }
        let weight = params.nu - two * kf;
        let next = -(params.theta * cur + weight * prev) / params.denominator(k);
        power = power * r;
        sum = sum + next * power;
        prev = cur;
        cur = next;
        k += 1;
    }
    Err(Error::NotConverged {
        r: r.to_f64_lossy(),
        tail_bound: last_bound.to_f64_lossy(),
        terms: max_terms,
    })
}

/// Default cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: usize = 500;
