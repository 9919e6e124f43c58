//! `Σ_m S(m, 0; q) m^{−s} = ζ(s) Σ_{a|q} a^{1−s} μ(q/a)`; no pole at `s = 1` once `q > 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, mobius};
use crate::error::{Error, Result};
use crate::expsum::kloosterman;
use crate::lfunc::hurwitz::zeta;
use crate::report::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamanujanSeries {
    pub q: u64,
    pub s: f64,
    pub m_max: u64,
    /// `Σ_{m ≤ M} S(m, 0; q) m^{−s}` with `S` summed from its definition.
    pub partial: f64,
    pub closed_form: f64,
    pub residual: f64,
    /// `q M^{1−s} / (s − 1)`, from `|S(m, 0; q)| ≤ q`.
    pub tail_bound: f64,
}

pub fn ramanujan_series(q: u64, s: f64, m_max: u64) -> Result<RamanujanSeries> {
    if q < 2 {
        return Err(Error::Pole);
    }
    if !(s > 1.0) || m_max == 0 {
        return Err(Error::Param(format!("need s > 1 and M ≥ 1 (s = {s}, M = {m_max})")));
    }
    let period: Vec<f64> = (0..q).map(|m| kloosterman(m as i64, 0, q).value.re.round()).collect();
    // smallest terms first
    let partial: f64 = (1..=m_max).rev().map(|m| period[(m % q) as usize] * (m as f64).powf(-s)).sum();
    let divisor_side: f64 =
        factor(q).divisors().iter().map(|&a| (a as f64).powf(1.0 - s) * mobius(q / a) as f64).sum();
    let closed_form = zeta(Complex64::new(s, 0.0))?.re * divisor_side;
    Ok(RamanujanSeries {
        q,
        s,
        m_max,
        partial,
        closed_form,
        residual: (partial - closed_form).abs(),
        tail_bound: q as f64 * (m_max as f64).powf(1.0 - s) / (s - 1.0),
    })
}

/// The residual against the tail bound.
pub fn ramanujan_series_check(q: u64, s: f64, m_max: u64) -> Result<(RamanujanSeries, Outcome)> {
    let r = ramanujan_series(q, s, m_max)?;
    let o = Outcome::at_most(r.residual, r.tail_bound, 0.0);
    Ok((r, o))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (r, o) = ramanujan_series_check(6, 2.0, 100_000).unwrap();
        assert!(o.pass && r.residual < 1e-3);
        let (r, o) = ramanujan_series_check(4, 3.0, 100_000).unwrap();
        assert!(o.pass && r.residual < 1e-6);
        assert!(matches!(ramanujan_series(1, 2.0, 10), Err(Error::Pole)));
        assert!(ramanujan_series(5, 1.0, 10).is_err());
    }

    #[test]
    fn prime_closed_form() {
        // q = p: ζ(s)(p^{1−s} − 1)
        let r = ramanujan_series(7, 2.0, 10).unwrap();
        let want = std::f64::consts::PI.powi(2) / 6.0 * (1.0 / 7.0 - 1.0);
        assert!((r.closed_form - want).abs() < 1e-13);
    }
}
