//! Elementary complete exponential sums.

use crate::arith::{gcd, inv_mod, mul_mod, rem_i};
use crate::sum::{CharSumValue, RootHistogram, Roots};

/// Kloosterman sum `S(m, n; c) = Σ*_{x mod c} e_c(m x + n x̄)`.
pub fn kloosterman(m: i64, n: i64, c: u64) -> CharSumValue {
    assert!(c >= 1);
    let (m, n) = (rem_i(m, c), rem_i(n, c));
    let mut hist = RootHistogram::new(c);
    let mut terms = 0;
    for x in 0..c {
        if gcd(x, c) != 1 {
            continue;
        }
        let xb = inv_mod(x, c).unwrap();
        hist.add((mul_mod(m, x, c) + mul_mod(n, xb, c)) % c, 1);
        terms += 1;
    }
    CharSumValue::new(hist.evaluate(&Roots::new(c)), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{phi, ramanujan_sum};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        // S(1,1;5) = 2cos(2π/5)·... evaluated by the direct cosine sum
        let direct: f64 = (1..5)
            .map(|x: u64| {
                let xb = inv_mod(x, 5).unwrap();
                (std::f64::consts::TAU * (x + xb) as f64 / 5.0).cos()
            })
            .sum();
        let s = kloosterman(1, 1, 5);
        assert!((s.value.re - direct).abs() < 1e-12);
        assert!((s.value.re - 0.381_966_011_250_105_1).abs() < 1e-9);
        assert!(s.value.im.abs() < 1e-12);
        assert!((kloosterman(1, 0, 6).value.re - 1.0).abs() < 1e-12);
        assert!((kloosterman(0, 0, 12).value.re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ramanujan_specialization() {
        for c in 1..60u64 {
            for m in 0..c as i64 {
                let s = kloosterman(m, 0, c);
                assert!((s.value.re - ramanujan_sum(m, c) as f64).abs() < 1e-9);
            }
            assert_eq!(kloosterman(0, 0, c).terms, phi(c));
        }
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(m in -500i64..500, n in -500i64..500, c in 1u64..400) {
            let a = kloosterman(m, n, c);
            let b = kloosterman(n, m, c);
            prop_assert!(a.agrees_with(&b));
            prop_assert!(a.value.im.abs() <= a.tol);
            prop_assert!(a.abs() <= c as f64 + a.tol);
        }
    }
}
