//! The divisor-function approximate functional equation
//! `τ(n)χ(n) = (2/τ(χ̄)) Σ_c χ(c)/c f(c/√n) Σ*_{r mod cq} χ̄(r) e_{cq}(nr)`
//! with `f(x) = (2πi)⁻¹ ∫_{(1)} x^{−2s} L(1+2s, χ₀) G(s) ds/s`, `G(s) = exp(s²)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, gcd};
use crate::characters::DirichletCharacter;
use crate::charsums::gauss::gauss_sum;
use crate::error::{Error, Result};
use crate::lfunc::hurwitz::zeta;
use crate::sum::{pairwise_sum, root};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    /// Integration over `s = 1 + iv`, `|v| ≤ v_max`.
    pub v_max: f64,
    pub step: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { v_max: 40.0, step: 0.05 }
    }
}

impl Quadrature {
    /// Rejects contours whose truncation or discretisation error is not small:
    /// `|G(1+iv)| = exp(1 − v²)` needs `v_max ≥ 6`, and the integrand has a
    /// pole at distance 1 from the line so the step must stay below 1/2.
    fn validate(&self) -> Result<()> {
        let ok = self.v_max.is_finite() && (6.0..=40.0).contains(&self.v_max) && self.step > 0.0 && self.step <= 0.5;
        if ok {
            Ok(())
        } else {
            Err(Error::Param(format!(
                "divergent quadrature: need 6 ≤ v_max ≤ 40 and 0 < step ≤ 0.5 (got {}, {})",
                self.v_max, self.step
            )))
        }
    }
}

/// Trapezoid weights for `f` modulo `q`, reusable across `x`.
pub struct AfeKernel {
    nodes: Vec<(f64, Complex64)>,
}

impl AfeKernel {
    pub fn new(q: u64, quad: Quadrature) -> Result<Self> {
        quad.validate()?;
        let primes: Vec<u64> = factor(q).parts().iter().map(|&(p, _)| p).collect();
        let n = (quad.v_max / quad.step).round() as i64;
        let mut nodes = Vec::with_capacity(2 * n as usize + 1);
        for k in -n..=n {
            let v = k as f64 * quad.step;
            let s = Complex64::new(1.0, v);
            let w = 1.0 + 2.0 * s;
            let mut l = zeta(w)?;
            for &p in &primes {
                l *= Complex64::new(1.0, 0.0) - (-w * (p as f64).ln()).exp();
            }
            let end = if k.abs() == n { 0.5 } else { 1.0 };
            let weight = l * (s * s).exp() / s * (end * quad.step / (2.0 * std::f64::consts::PI));
            nodes.push((v, weight));
        }
        Ok(Self { nodes })
    }

    /// `f(x)` for `x > 0`.
    pub fn f(&self, x: f64) -> Complex64 {
        let lx = x.ln();
        let terms: Vec<Complex64> =
            self.nodes.iter().map(|&(v, w)| w * Complex64::from_polar(1.0, -2.0 * v * lx)).collect();
        pairwise_sum(&terms) / (x * x)
    }
}

/// `Σ*_{r mod cq} χ̄(r) e_{cq}(nr)`.
fn inner_sum(chi_bar: &[Complex64], q: u64, c: u64, n: u64) -> Complex64 {
    let m = c * q;
    let terms: Vec<Complex64> = (1..m)
        .filter(|&r| gcd(r, m) == 1)
        .map(|r| chi_bar[(r % q) as usize] * root((n % m) * r % m, m))
        .collect();
    pairwise_sum(&terms)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AfeResult {
    pub n: u64,
    pub c_max: u64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

fn divisor_count(n: u64) -> u64 {
    factor(n).parts().iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Both sides of the expansion, the right truncated at `c ≤ c_max`.
pub fn divisor_afe_with(chi: &DirichletCharacter, kernel: &AfeKernel, n: u64, c_max: u64) -> Result<AfeResult> {
    let q = chi.modulus();
    if q < 2 {
        return Err(Error::Param("modulus must exceed 1".into()));
    }
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: q, conductor: chi.conductor() });
    }
    if n == 0 || gcd(n, q) != 1 {
        return Err(Error::Precondition(format!("need (n, q) = 1 (n = {n}, q = {q})")));
    }
    let values = chi.table().values(chi.group().roots());
    let bar: Vec<Complex64> = values.iter().map(|z| z.conj()).collect();
    let tau_bar = gauss_sum(&chi.conj(), 1).value;
    let sqrt_n = (n as f64).sqrt();
    let mut terms = Vec::new();
    for c in 1..=c_max {
        let chi_c = values[(c % q) as usize];
        if chi_c.norm() == 0.0 {
            continue;
        }
        terms.push(chi_c / c as f64 * kernel.f(c as f64 / sqrt_n) * inner_sum(&bar, q, c, n));
    }
    let rhs = pairwise_sum(&terms) * 2.0 / tau_bar;
    let lhs = values[(n % q) as usize] * divisor_count(n) as f64;
    Ok(AfeResult { n, c_max, lhs, rhs, residual: (lhs - rhs).norm() })
}

pub fn divisor_afe_check(chi: &DirichletCharacter, n: u64, c_max: u64, quad: Quadrature) -> Result<f64> {
    let kernel = AfeKernel::new(chi.modulus(), quad)?;
    Ok(divisor_afe_with(chi, &kernel, n, c_max)?.residual)
}

/// `⌊50√n⌋`, the default truncation.
pub fn default_c_max(n: u64) -> u64 {
    (50.0 * (n as f64).sqrt()).floor() as u64
}
