//! Complex accumulation, roots of unity and the shared tolerance policy.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative precision unit of the tolerance policy.
pub const TOL_UNIT: f64 = 1e-9;

/// Absolute tolerance for a sum of `terms` unit-size summands whose value has
/// modulus `magnitude`.
pub fn tolerance(terms: u64, magnitude: f64) -> f64 {
    tolerance_with(TOL_UNIT, terms, magnitude)
}

/// [`tolerance`] with a caller-chosen precision unit.
pub fn tolerance_with(unit: f64, terms: u64, magnitude: f64) -> f64 {
    unit * (terms as f64).sqrt().max(1.0) * magnitude.max(1.0)
}

/// Value of a finite character sum together with its size and tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharSumValue {
    pub value: Complex64,
    pub terms: u64,
    pub tol: f64,
}

impl CharSumValue {
    pub fn new(value: Complex64, terms: u64) -> Self {
        Self { value, terms, tol: tolerance(terms, value.norm()) }
    }

    /// An exact zero produced without summation.
    pub fn zero(terms: u64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), terms)
    }

    /// Tolerance of this value under a different precision unit.
    pub fn tol_with(&self, unit: f64) -> f64 {
        tolerance_with(unit, self.terms, self.abs())
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// Rescales the value, keeping the term count (used for exact prefactors).
    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.value * factor, self.terms)
    }

    /// Whether `other` lies within the combined tolerance of both values.
    pub fn agrees_with(&self, other: &CharSumValue) -> bool {
        self.deviation(other) <= self.tol.max(other.tol)
    }

    pub fn deviation(&self, other: &CharSumValue) -> f64 {
        (self.value - other.value).norm()
    }
}

/// `e(k/n) = exp(2πik/n)` for `k` in `[0, n)`, built symmetrically so that
/// conjugate entries are exact conjugates.
#[derive(Clone, Debug)]
pub struct Roots {
    n: u64,
    table: Vec<Complex64>,
}

impl Roots {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let mut table = vec![Complex64::new(1.0, 0.0); n as usize];
        for k in 1..=(n / 2) {
            let z = root(k, n);
            table[k as usize] = z;
            table[(n - k) as usize] = z.conj();
        }
        Self { n, table }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn get(&self, k: u64) -> Complex64 {
        self.table[(k % self.n) as usize]
    }
}

/// `e(k/n)`, exact at the quarter turns.
pub fn root(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// `e_q(x) = exp(2πix/q)` for a signed integer argument.
pub fn e_q(x: i64, q: u64) -> Complex64 {
    root(crate::arith::rem_i(x, q), q)
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Integer multiplicities of the roots `e(k/n)`: an exact representation of
/// a sum of roots of unity, evaluated to floating point only at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootHistogram {
    n: u64,
    counts: Vec<i64>,
}

impl RootHistogram {
    pub fn new(n: u64) -> Self {
        Self { n, counts: vec![0; n as usize] }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn add(&mut self, k: u64, mult: i64) {
        self.counts[(k % self.n) as usize] += mult;
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn total(&self) -> i64 {
        self.counts.iter().sum()
    }

    pub fn merge(mut self, other: &RootHistogram) -> Self {
        assert_eq!(self.n, other.n);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }

    /// `Σ counts[k]·e(k/n)`.
    pub fn evaluate(&self, roots: &Roots) -> Complex64 {
        assert_eq!(roots.order(), self.n);
        let terms: Vec<Complex64> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| roots.get(k as u64) * c as f64)
            .collect();
        pairwise_sum(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_symmetric() {
        for n in 1..40 {
            let r = Roots::new(n);
            for k in 0..n {
                let z = r.get(k);
                assert!((z.norm() - 1.0).abs() < 1e-15);
                assert_eq!(r.get((n - k) % n), z.conj());
            }
        }
        assert_eq!(root(1, 4), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn full_histogram_cancels() {
        let n = 12;
        let mut h = RootHistogram::new(n);
        for k in 0..n {
            h.add(k, 3);
        }
        assert!(h.evaluate(&Roots::new(n)).norm() < 1e-13);
        assert_eq!(h.total(), 36);
    }

    #[test]
    fn tolerance_policy() {
        assert_eq!(tolerance(1, 0.0), 1e-9);
        assert!((tolerance(100, 5.0) - 5e-8).abs() < 1e-20);
        let a = CharSumValue::new(Complex64::new(1.0, 0.0), 4);
        let b = CharSumValue::new(Complex64::new(1.0 + 1e-10, 0.0), 4);
        assert!(a.agrees_with(&b));
    }
}
