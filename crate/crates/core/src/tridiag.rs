//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, and
//! eigenvectors by inverse iteration.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    diag: Vec<T>,
    off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::OutOfRange { field: "diag", reason: "matrix must be non-empty".into() });
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::OutOfRange {
                field: "off",
                reason: format!("expected {} off-diagonal entries, got {}", diag.len() - 1, off.len()),
            });
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { field: "matrix" });
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn off(&self) -> &[T] {
        &self.off
    }

    /// `(lower, upper)` Gershgorin bounds on the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.dim();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut radius = T::zero();
            if i > 0 {
                radius = radius + self.off[i - 1].abs();
            }
            if i + 1 < n {
                radius = radius + self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    fn norm(&self) -> T {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(T::min_positive_value())
    }

    fn pivot_floor(&self) -> T {
        let max_off2 = self.off.iter().fold(T::min_positive_value(), |m, e| m.max(*e * *e));
        T::min_positive_value() * max_off2.max(T::one())
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: T) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q.abs() < floor {
                q = -floor;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (zero based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> Result<T> {
        let n = self.dim();
        if index >= n {
            return Err(Error::BracketFailure { index, reason: format!("matrix has only {n} eigenvalues") });
        }
        if n == 1 {
            return Ok(self.diag[0]);
        }
        let (glo, ghi) = self.gershgorin();
        let pad = self.norm() * T::epsilon() * T::lit(4.0) + self.pivot_floor();
        let mut lo = glo - pad;
        let mut hi = ghi + pad;
        let two = T::lit(2.0);
        for _ in 0..400 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            let width = hi - lo;
            if width <= two * T::epsilon() * lo.abs().max(hi.abs()) + self.pivot_floor() {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((lo + hi) / two)
    }

    /// Width used when certifying that a computed eigenvalue is isolated.
    pub fn certification_width(&self) -> T {
        self.norm() * T::epsilon() * T::lit(1024.0)
    }

    /// The `count` smallest eigenvalues, ascending. Each one is certified by
    /// checking that `[lambda - w, lambda + w]` holds exactly one eigenvalue and
    /// that exactly `index` lie below it.
    pub fn lowest_eigenvalues(&self, count: usize) -> Result<Vec<T>> {
        let count = count.min(self.dim());
        let width = self.certification_width();
        (0..count)
            .map(|k| {
                let lambda = self.eigenvalue(k)?;
                let below = self.count_below(lambda - width);
                let within = self.count_below(lambda + width) - below;
                if below != k || within != 1 {
                    return Err(Error::BracketFailure {
                        index: k,
                        reason: format!("{within} eigenvalue(s) within {width} of {lambda}, {below} below"),
                    });
                }
                Ok(lambda)
            })
            .collect()
    }

    /// `y = T x`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y = y + self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y = y + self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Unit eigenvector for an accurate eigenvalue estimate, by inverse
    /// iteration. The sign is fixed so that the first component that is not
    /// negligible is positive.
    pub fn eigenvector(&self, lambda: T) -> Vec<T> {
        let n = self.dim();
        if n == 1 {
            return vec![T::one()];
        }
        let shift = lambda + self.norm() * T::epsilon() * T::lit(8.0);
        let lu = TridiagonalLu::factor(self, shift);
        let mut x: Vec<T> = (0..n).map(|i| T::one() + T::lit(((i * 7919) % 101) as f64 / 1000.0)).collect();
        for _ in 0..4 {
            lu.solve(&mut x);
            normalize(&mut x);
        }
        let peak = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > peak * T::lit(1e-6)) {
            if *first < T::zero() {
                x.iter_mut().for_each(|v| *v = -*v);
            }
        }
        x
    }
}

fn normalize<T: Real>(x: &mut [T]) {
    let norm = x.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
    if norm > T::zero() {
        x.iter_mut().for_each(|v| *v = *v / norm);
    }
}

/// LU factorization of `T - shift I` with partial pivoting.
struct TridiagonalLu<T> {
    lower: Vec<T>,
    diag: Vec<T>,
    upper: Vec<T>,
    upper2: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Real> TridiagonalLu<T> {
    fn factor(matrix: &SymTridiagonal<T>, shift: T) -> Self {
        let n = matrix.dim();
        let mut lower = matrix.off.clone();
        let mut diag: Vec<T> = matrix.diag.iter().map(|d| *d - shift).collect();
        let mut upper = matrix.off.clone();
        let mut upper2 = vec![T::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if diag[i].abs() >= lower[i].abs() {
                if diag[i] != T::zero() {
                    let fact = lower[i] / diag[i];
                    lower[i] = fact;
                    diag[i + 1] = diag[i + 1] - fact * upper[i];
                }
            } else {
                let fact = diag[i] / lower[i];
                diag[i] = lower[i];
                lower[i] = fact;
                let temp = upper[i];
                upper[i] = diag[i + 1];
                diag[i + 1] = temp - fact * diag[i + 1];
                if i + 2 < n {
                    upper2[i] = upper[i + 1];
                    upper[i + 1] = -fact * upper[i + 1];
                }
                swapped[i] = true;
            }
        }
        let tiny = matrix.norm() * T::epsilon();
        for d in diag.iter_mut() {
            if d.abs() < tiny {
                *d = if *d < T::zero() { -tiny } else { tiny };
            }
        }
        Self { lower, diag, upper, upper2, swapped }
    }

    fn solve(&self, b: &mut [T]) {
        let n = self.diag.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.lower[i] * b[i];
            } else {
                b[i + 1] = b[i + 1] - self.lower[i] * b[i];
            }
        }
        b[n - 1] = b[n - 1] / self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
    }
}
