//! Complex log-gamma by Stirling's series after an upward shift.

use num_complex::Complex64;

/// `B_{2k}` for `k = 1..=15`.
pub(crate) const BERNOULLI_2K: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

const SHIFT_TO: f64 = 20.0;

/// `log Γ(z)` up to a multiple of `2πi`, for `z` off the non-positive integers.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < SHIFT_TO {
        acc -= z.ln();
        z += 1.0;
    }
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut series = (z - 0.5) * z.ln() - z + half_ln_2pi;
    let z2 = z * z;
    let mut zp = z;
    for (k, b) in BERNOULLI_2K.iter().take(10).enumerate() {
        let k = (k + 1) as f64;
        series += b / (2.0 * k * (2.0 * k - 1.0)) / zp;
        zp *= z2;
    }
    acc + series
}

/// `Γ(a) / Γ(b)`.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Complex64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_values() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!((ln_gamma(c(1.0))).norm() < 1e-14);
        assert!((ln_gamma(c(5.0)).re - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(c(0.5)).re - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn reflection_on_critical_line() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        for t in [0.5, 3.0, 10.0, 25.0] {
            let g = ln_gamma(Complex64::new(0.5, t)).re * 2.0;
            let want = (std::f64::consts::PI / (std::f64::consts::PI * t).cosh()).ln();
            assert!((g - want).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn recurrence() {
        let z = Complex64::new(0.3, 7.0);
        let lhs = gamma_ratio(z + 1.0, z);
        assert!((lhs - z).norm() < 1e-12);
    }
}
