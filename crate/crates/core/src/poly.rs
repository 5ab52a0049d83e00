//! Small dense polynomials in the power basis (`coeffs[k]` multiplies `x^k`).

use crate::scalar::{Field, Real};

pub fn horner<T: Field>(coeffs: &[T], x: &T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

pub fn derivative<T: Field>(coeffs: &[T]) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| T::from_int(k as i64) * c.clone())
        .collect()
}

fn trim<T: Real>(mut p: Vec<T>, tol: T) -> Vec<T> {
    let scale = p.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    while let Some(last) = p.last() {
        if last.abs() <= tol * scale || scale.is_zero() {
            p.pop();
        } else {
            break;
        }
    }
    p
}

fn normalized<T: Real>(p: Vec<T>) -> Vec<T> {
    let scale = p.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    if scale.is_zero() {
        return p;
    }
    p.into_iter().map(|c| c / scale).collect()
}

/// `-(a mod b)`; both inputs trimmed, `b` non-empty.
fn negated_remainder<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut r = a.to_vec();
    let lead = *b.last().unwrap();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = *r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i] - factor * *c;
        }
        r.pop();
    }
    r.into_iter().map(|c| -c).collect()
}

/// Sturm chain of a real polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain<T> {
    chain: Vec<Vec<T>>,
}

impl<T: Real> SturmChain<T> {
    pub fn new(coeffs: &[T]) -> Self {
        let tol = T::epsilon() * T::lit(1e3);
        let p0 = normalized(trim(coeffs.to_vec(), T::epsilon()));
        if p0.len() <= 1 {
            return Self { chain: vec![p0] };
        }
        let p1 = normalized(trim(derivative(&p0), T::epsilon()));
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].len() <= 1 {
                break;
            }
            // chain members are normalized to unit max, so tol is absolute here
            let mut r = negated_remainder(&chain[n - 2], &chain[n - 1]);
            while r.last().is_some_and(|c| c.abs() <= tol) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
            chain.push(normalized(r));
        }
        Self { chain }
    }

    fn sign_changes(&self, signs: impl Iterator<Item = T>) -> usize {
        let mut changes = 0;
        let mut last: Option<bool> = None;
        for v in signs {
            if v.is_zero() {
                continue;
            }
            let positive = v > T::zero();
            if let Some(prev) = last {
                if prev != positive {
                    changes += 1;
                }
            }
            last = Some(positive);
        }
        changes
    }

    pub fn variations_at(&self, x: T) -> usize {
        self.sign_changes(self.chain.iter().map(|p| horner(p, &x)))
    }

    pub fn variations_at_infinity(&self) -> usize {
        self.sign_changes(self.chain.iter().map(|p| p.last().copied().unwrap_or_else(T::zero)))
    }

    /// Distinct roots in `(a, b]`.
    pub fn count_between(&self, a: T, b: T) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

/// Strips factors of `x` (roots at the origin).
fn without_origin_roots<T: Real>(coeffs: &[T]) -> Vec<T> {
    let trimmed = trim(coeffs.to_vec(), T::epsilon());
    let first = trimmed.iter().position(|c| !c.is_zero()).unwrap_or(trimmed.len());
    trimmed[first..].to_vec()
}

/// Number of distinct strictly positive real roots.
pub fn count_positive_roots<T: Real>(coeffs: &[T]) -> usize {
    let p = without_origin_roots(coeffs);
    if p.len() <= 1 {
        return 0;
    }
    let chain = SturmChain::new(&p);
    chain.variations_at(T::zero()).saturating_sub(chain.variations_at_infinity())
}

/// Cauchy bound on the magnitude of all roots.
fn root_bound<T: Real>(p: &[T]) -> T {
    let lead = p.last().unwrap().abs();
    T::one() + p[..p.len() - 1].iter().fold(T::zero(), |m, c| m.max(c.abs() / lead))
}

/// Distinct strictly positive real roots, ascending.
pub fn positive_roots<T: Real>(coeffs: &[T]) -> Vec<T> {
    let p = without_origin_roots(coeffs);
    if p.len() <= 1 {
        return Vec::new();
    }
    let chain = SturmChain::new(&p);
    let mut roots = Vec::new();
    let mut stack = vec![(T::zero(), root_bound(&p))];
    let two = T::lit(2.0);
    while let Some((a, b)) = stack.pop() {
        let count = chain.count_between(a, b);
        if count == 0 {
            continue;
        }
        let mid = (a + b) / two;
        let narrow = b - a <= T::epsilon() * T::lit(16.0) * b.abs().max(T::one());
        if count == 1 || narrow {
            roots.push(refine_root(&p, &chain, a, b));
            continue;
        }
        stack.push((a, mid));
        stack.push((mid, b));
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Bisection on the Sturm count inside an isolating interval, then Newton.
fn refine_root<T: Real>(p: &[T], chain: &SturmChain<T>, mut a: T, mut b: T) -> T {
    let two = T::lit(2.0);
    for _ in 0..200 {
        let mid = (a + b) / two;
        if mid <= a || mid >= b {
            break;
        }
        if chain.count_between(a, mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    let dp = derivative(p);
    let mut x = (a + b) / two;
    for _ in 0..3 {
        let d = horner(&dp, &x);
        if d.is_zero() {
            break;
        }
        let next = x - horner(p, &x) / d;
        if !next.is_finite() || (next - x).abs() > (b - a).abs() * T::lit(4.0) + T::epsilon() * x.abs() {
            break;
        }
        x = next;
    }
    x
}
