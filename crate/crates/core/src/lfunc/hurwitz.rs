//! Hurwitz zeta by Euler–Maclaurin summation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lfunc::gamma::BERNOULLI_2K;

/// Shift `N = ⌈10 + 2|Im s|⌉`.
pub fn shift_for(s: Complex64) -> u64 {
    (10.0 + 2.0 * s.im.abs()).ceil() as u64
}

/// `ζ(s, a)` and an estimate of its truncation error, for `a ∈ (0, 1]`.
pub fn hurwitz_zeta_est(s: Complex64, a: f64) -> Result<(Complex64, f64)> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Param(format!("Hurwitz parameter a = {a} must lie in (0, 1]")));
    }
    let n = shift_for(s);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += (-s * (k as f64 + a).ln()).exp();
    }
    let x = n as f64 + a;
    let lx = x.ln();
    let xs = (-s * lx).exp();
    acc += xs * x / (s - 1.0) + xs * 0.5;
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j−2) · x^{−s−2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut xpow = xs / x;
    let mut last = 0.0;
    for (j, b) in BERNOULLI_2K.iter().enumerate() {
        let term = rising * xpow * (b / fact);
        acc += term;
        last = term.norm();
        let m = 2 * j + 1;
        rising *= (s + m as f64) * (s + (m + 1) as f64);
        fact *= ((m + 2) * (m + 3)) as f64;
        xpow /= x * x;
    }
    let rounding = 1e-16 * (n as f64) * (a.powf(-s.re)).max(1.0);
    Ok((acc, last + rounding))
}

pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    hurwitz_zeta_est(s, a).map(|v| v.0)
}

/// Riemann `ζ(s)`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

/// `ζ(s)` through the alternating series and Borwein's acceleration, used as
/// an independent check on the Euler–Maclaurin evaluation.
pub fn zeta_borwein(s: Complex64, n: usize) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    // d_k = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut sum = term;
    d.push(nf * sum);
    for i in 1..=n {
        let i_f = i as f64;
        term *= (nf + i_f - 1.0) * (nf - i_f + 1.0) * 4.0 / ((2.0 * i_f - 1.0) * (2.0 * i_f));
        sum += term;
        d.push(nf * sum);
    }
    let dn = d[n];
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += (-s * ((k + 1) as f64).ln()).exp() * (sign * (d[k] - dn));
    }
    let eta = -acc / dn;
    let two = Complex64::new(2.0, 0.0);
    Ok(eta / (Complex64::new(1.0, 0.0) - two.powc(Complex64::new(1.0, 0.0) - s)))
}
