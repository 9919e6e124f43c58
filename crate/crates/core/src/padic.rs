//! Truncated p-adic logarithm on `1 + pℤ` (odd `p`) or `1 + 4ℤ` (`p = 2`).

use crate::arith::{inv_mod, pow_mod, valuation};
use crate::error::{Error, Result};

/// Smallest valuation `v_p(x - 1)` on the domain of the logarithm.
fn domain_valuation(p: u64) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// `log_p(x) mod p^β` for `x` in the domain.
///
/// Sums `Σ (-1)^{n+1} y^n / n` with `y = x - 1`. Each term is computed
/// exactly by dividing `y^n` (taken mod `p^{β+v_p(n)}`) by `p^{v_p(n)}`,
/// and the series stops once `n·v_p(y) - ⌊log_p n⌋ ≥ β`, after which every
/// further term vanishes mod `p^β`.
pub fn padic_log(x: u64, p: u64, beta: u32) -> Result<u64> {
    let modulus = p.pow(beta);
    let v0 = domain_valuation(p);
    let need = p.pow(v0);
    if x % need != 1 % need {
        return Err(Error::PadicDomain { x, p, need });
    }
    let y = (x % modulus + modulus - 1) % modulus;
    if y == 0 {
        return Ok(0);
    }
    let mut acc: u128 = 0;
    let m128 = modulus as u128;
    let mut n: u64 = 1;
    loop {
        let vn = valuation(n, p);
        let floor_log = (n as f64).log(p as f64).floor() as u64;
        // conservative floor of log_p(n); the exact one is recomputed below
        let mut fl = floor_log.saturating_sub(1);
        while p.pow((fl + 1) as u32) <= n {
            fl += 1;
        }
        if n * v0 as u64 >= beta as u64 + fl {
            break;
        }
        let big = modulus * p.pow(vn);
        let yn = pow_mod(y, n, big);
        debug_assert_eq!(yn % p.pow(vn), 0);
        let numer = (yn / p.pow(vn)) % modulus;
        let unit_part = n / p.pow(vn);
        let inv = inv_mod(unit_part % modulus, modulus).expect("unit part of n is invertible");
        let term = (numer as u128 * inv as u128) % m128;
        if n % 2 == 1 {
            acc = (acc + term) % m128;
        } else {
            acc = (acc + m128 - term) % m128;
        }
        n += 1;
    }
    Ok(acc as u64)
}

/// Table of `t ↦ log_p(1 + p t) mod p^β` (odd `p`) or `t ↦ log_2(1 + 4t) mod 2^β`.
#[derive(Clone, Debug)]
pub struct PadicLogTable {
    p: u64,
    beta: u32,
    step: u64,
    values: Vec<u64>,
}

impl PadicLogTable {
    pub fn new(p: u64, beta: u32) -> Result<Self> {
        let step = p.pow(domain_valuation(p));
        let modulus = p.pow(beta);
        if modulus < step {
            return Err(Error::ExponentRange { p, beta, reason: "domain of the logarithm is trivial" });
        }
        let count = modulus / step;
        let values = (0..count)
            .map(|t| padic_log(1 + step * t, p, beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p, beta, step, values })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// `log(1 + step·t)`, where `step` is `p` or `4`.
    pub fn log_at(&self, t: u64) -> u64 {
        self.values[(t % self.values.len() as u64) as usize]
    }

    /// `log(x)` for `x` in the domain.
    pub fn log(&self, x: u64) -> Result<u64> {
        let modulus = self.p.pow(self.beta);
        let x = x % modulus;
        if x % self.step != 1 % self.step {
            return Err(Error::PadicDomain { x, p: self.p, need: self.step });
        }
        Ok(self.log_at((x + modulus - 1) % modulus / self.step))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(padic_log(1, 3, 2).unwrap(), 0);
        assert_eq!(padic_log(4, 3, 2).unwrap(), 3);
        assert_eq!(padic_log(7, 3, 2).unwrap(), 6);
        assert!(matches!(padic_log(2, 3, 2), Err(Error::PadicDomain { .. })));
        assert!(matches!(padic_log(3, 2, 5), Err(Error::PadicDomain { .. })));
    }

    #[test]
    fn homomorphism_on_whole_domain() {
        for &(p, b) in &[(3u64, 2u32), (3, 5), (5, 3), (7, 3), (2, 3), (2, 6), (11, 2)] {
            let table = PadicLogTable::new(p, b).unwrap();
            let m = p.pow(b);
            let step = if p == 2 { 4 } else { p };
            for s in 0..m / step {
                for t in 0..m / step {
                    let x = 1 + step * s;
                    let y = 1 + step * t;
                    let lhs = table.log(x * y % m).unwrap();
                    let rhs = (table.log(x).unwrap() + table.log(y).unwrap()) % m;
                    assert_eq!(lhs, rhs, "p^b={m} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn linear_approximation_near_one() {
        // log(1 + p^β x) ≡ p^β x (mod p^{2β}) for odd p
        for &(p, b) in &[(3u64, 1u32), (3, 2), (5, 2), (7, 1), (3, 3)] {
            let pb = p.pow(b);
            let m2 = pb * pb;
            for x in 0..pb {
                assert_eq!(padic_log(1 + pb * x, p, 2 * b).unwrap(), pb * x % m2);
            }
        }
    }

    proptest! {
        #[test]
        fn log_is_additive(p_idx in 0usize..4, s in 0u64..100_000, t in 0u64..100_000) {
            let (p, b) = [(3u64, 9u32), (5, 6), (7, 5), (2, 16)][p_idx];
            let m = p.pow(b);
            let step = if p == 2 { 4 } else { p };
            let x = (1 + step * s) % m;
            let y = (1 + step * t) % m;
            let lhs = padic_log(x * y % m, p, b).unwrap();
            let rhs = (padic_log(x, p, b).unwrap() + padic_log(y, p, b).unwrap()) % m;
            prop_assert_eq!(lhs, rhs);
        }
    }
}
