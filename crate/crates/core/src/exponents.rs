//! Upper bounds `m(α, β)` for `log_p max |g(χ, ψ)|/p^β` over the class
//! `v_p(Δ) = α`, and the exponent inequality they have to satisfy.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::prime_power;
use crate::characters::{enumerate_characters, CharacterFilter};
use crate::charsums::gsum::{delta_class, g_bound, GKernel, GMethod};
use crate::error::{Error, Result};
use crate::report::{Outcome, SweepReport, Table, Tally};

/// An element of `½ℤ ∪ {−∞}`; finite values are stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MValue {
    NegInfinity,
    Doubled(i64),
}

impl MValue {
    pub fn int(n: i64) -> Self {
        MValue::Doubled(2 * n)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            MValue::NegInfinity => f64::NEG_INFINITY,
            MValue::Doubled(d) => d as f64 / 2.0,
        }
    }
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MValue::NegInfinity => f.write_str("-inf"),
            MValue::Doubled(d) if d % 2 == 0 => write!(f, "{}", d / 2),
            MValue::Doubled(d) => write!(f, "{}", d as f64 / 2.0),
        }
    }
}

/// `m(α, β)` for any `α ≥ 0`; `β = 1` has the single class `α = 0` with
/// value 0 (the prime case is bounded by a constant, not a power of `p`).
pub fn m_value(alpha: u32, beta: u32) -> MValue {
    let (a, b) = (alpha as i64, beta as i64);
    if beta % 2 == 0 {
        if 2 * a >= b {
            MValue::int(b / 4)
        } else if a % 2 == 1 {
            MValue::NegInfinity
        } else {
            MValue::Doubled(a)
        }
    } else if a == 0 {
        MValue::int(0)
    } else if 2 * a > b {
        MValue::Doubled(2 * ((b + 1) / 4) - 1)
    } else if a % 2 == 1 {
        MValue::NegInfinity
    } else {
        MValue::Doubled(a - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentTable {
    pub beta: u32,
    /// `entries[α]` for `0 ≤ α ≤ β − 1`.
    pub entries: Vec<MValue>,
}

pub fn m_table(beta: u32) -> ExponentTable {
    ExponentTable { beta, entries: (0..beta).map(|a| m_value(a, beta)).collect() }
}

/// `β − m − max(β − α, ⌈2β/3⌉)`, `None` for `m = −∞`, doubled.
pub fn slack_doubled(alpha: u32, beta: u32) -> Option<i64> {
    let b = beta as i64;
    let reach = (b - alpha as i64).max((2 * b + 2) / 3);
    match m_value(alpha, beta) {
        MValue::NegInfinity => None,
        MValue::Doubled(m) => Some(2 * (b - reach) - m),
    }
}

fn half(d: i64) -> serde_json::Value {
    if d % 2 == 0 {
        json!(d / 2)
    } else {
        json!(d as f64 / 2.0)
    }
}

/// Every `(α, β)` with `1 ≤ β ≤ β_max`, plus `⌊β/4⌋ + ⌈2β/3⌉ ≤ β` for even `β`.
pub fn exponent_inequality_check(beta_max: u32) -> SweepReport {
    let mut tally = Tally::default();
    let mut rows = Vec::new();
    for beta in 1..=beta_max {
        for alpha in 0..beta {
            let m = m_value(alpha, beta);
            let slack = slack_doubled(alpha, beta);
            let outcome = match slack {
                None => Outcome::flag(true, true),
                Some(s) => Outcome::at_most((2 * beta as i64 - s) as f64 / 2.0, beta as f64, 0.0),
            };
            tally.record("exponents.inequality", outcome, || json!({"alpha": alpha, "beta": beta}));
            rows.push(vec![
                json!(beta),
                json!(alpha),
                json!(m.to_string()),
                slack.map_or(json!("inf"), half),
            ]);
        }
        if beta % 2 == 0 {
            let b = beta as i64;
            let lhs = b / 4 + (2 * b + 2) / 3;
            tally.record("exponents.even_reduction", Outcome::at_most(lhs as f64, b as f64, 0.0), || {
                json!({"beta": beta})
            });
        }
    }
    let mut report = SweepReport::new("exponents").with_param("beta_max", beta_max);
    report.absorb(tally);
    report.table = Some(Table { columns: ["beta", "alpha", "m", "slack"].map(String::from).to_vec(), rows });
    report
}

/// For every primitive pair mod `p^β`, `max |g|/p^β` per class `α`, checked
/// against `2 p^{m(α, β)}`; a `−∞` class must have `|g| ≤ tol`.
pub fn m_empirical_check(p: u64, beta: u32, tol_unit: f64) -> Result<SweepReport> {
    let q = p.checked_pow(beta).ok_or(Error::ExponentRange { p, beta, reason: "overflow" })?;
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !(2..=4).contains(&beta) || q > 343 {
        return Err(Error::ExponentRange { p, beta, reason: "need 2 ≤ β ≤ 4 and p^β ≤ 343" });
    }
    prime_power(q)?;
    let prims = enumerate_characters(q, CharacterFilter::Primitive);
    let qf = q as f64;
    let mut tally = Tally::default();
    let mut maxima: BTreeMap<u32, (f64, usize)> = BTreeMap::new();
    for chi in &prims {
        let kernel = GKernel::new(chi, GMethod::Direct)?;
        for psi in &prims {
            let alpha = delta_class(&g_bound(chi, psi)?, p, beta);
            let g = kernel.eval(psi);
            let entry = maxima.entry(alpha).or_insert((0.0, 0));
            entry.0 = entry.0.max(g.abs() / qf);
            entry.1 += 1;
            let tol = g.tol_with(tol_unit);
            let outcome = match m_value(alpha, beta) {
                MValue::NegInfinity => Outcome::at_most(g.abs(), 0.0, tol),
                m => Outcome::at_most(g.abs() / qf, 2.0 * (p as f64).powf(m.as_f64()), tol / qf),
            };
            tally.record("exponents.empirical", outcome, || json!({"chi": chi, "psi": psi, "alpha": alpha}));
        }
    }
    let mut report = SweepReport::new("exponents").with_param("p", p).with_param("beta", beta);
    report.absorb(tally);
    for (alpha, (max, count)) in maxima {
        report.measure(
            &format!("alpha_{alpha}"),
            json!({"max_ratio": max, "pairs": count, "m": m_value(alpha, beta).to_string()}),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_examples() {
        assert_eq!(m_value(1, 4), MValue::NegInfinity);
        assert_eq!(m_value(2, 4), MValue::int(1));
        assert_eq!(m_value(0, 5), MValue::int(0));
        assert_eq!(m_value(0, 2), MValue::int(0));
        assert_eq!(m_value(2, 3), MValue::Doubled(1));
        assert_eq!(m_value(3, 5), MValue::Doubled(1));
        assert_eq!(m_table(6).entries.len(), 6);
        assert_eq!(MValue::Doubled(3).to_string(), "1.5");
    }

    #[test]
    fn worked_inequality() {
        // β = 10, α = 5: 2 + 7 ≤ 10
        assert_eq!(slack_doubled(5, 10), Some(2));
        assert_eq!(slack_doubled(0, 2), Some(0));
        assert_eq!(slack_doubled(1, 4), None);
    }

    #[test]
    fn inequality_through_200() {
        let r = exponent_inequality_check(200);
        assert!(r.passed(), "{:?}", r.failures.first());
        let rows = r.table.as_ref().unwrap().rows.len();
        assert_eq!(rows, 200 * 201 / 2);
    }

    #[test]
    fn odd_table_overlap_is_consistent() {
        // at α = (β+1)/2 even, both odd-β cases apply and agree
        for beta in (3..200u32).step_by(4) {
            let alpha = beta.div_ceil(2);
            assert_eq!(alpha % 2, 0);
            assert_eq!(MValue::Doubled(alpha as i64 - 1), m_value(alpha, beta));
        }
    }

    #[test]
    fn empirical_small() {
        for (p, beta) in [(3u64, 2u32), (3, 3), (5, 2), (5, 3), (3, 4), (7, 2), (7, 3)] {
            let r = m_empirical_check(p, beta, 1e-9).unwrap();
            assert!(r.passed(), "{p}^{beta}: {:?}", r.failures.first());
        }
        assert!(m_empirical_check(11, 3, 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn m_is_monotone_in_large_alpha(beta in 2u32..300, extra in 0u32..5) {
            let top = m_value(beta - 1, beta);
            prop_assert_eq!(m_value(beta + extra, beta), top);
        }
    }
}
