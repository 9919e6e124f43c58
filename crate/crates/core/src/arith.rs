//! Exact integer and modular arithmetic on `u64` moduli.
//!
//! Everything here is small-modulus arithmetic: products go through `u128`
//! so any modulus below 2^64 is safe, although the rest of the crate only
//! ever builds tables for moduli up to [`MAX_MODULUS`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus for which tables are built.
pub const MAX_MODULUS: u64 = 1_000_000;

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    value: u64,
    parts: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from prime-power parts, checking the invariants.
    pub fn from_parts(parts: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        for w in parts.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Precondition("primes must be strictly increasing".into()));
            }
        }
        for &(p, b) in &parts {
            if b == 0 || !is_prime(p) {
                return Err(Error::Precondition(format!("{p}^{b} is not a prime power part")));
            }
            value = value
                .checked_mul(p.checked_pow(b).ok_or_else(|| Error::Param("overflow".into()))?)
                .ok_or_else(|| Error::Param("overflow".into()))?;
        }
        Ok(Self { value, parts })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn parts(&self) -> &[(u64, u32)] {
        &self.parts
    }

    /// The prime powers `p^β` in increasing order of `p`.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|&(p, b)| p.pow(b))
    }

    pub fn is_prime_power(&self) -> bool {
        self.parts.len() == 1
    }

    /// Exponent of `p` in the factorization (0 when `p` does not divide).
    pub fn valuation(&self, p: u64) -> u32 {
        self.parts.iter().find(|&&(r, _)| r == p).map_or(0, |&(_, b)| b)
    }

    /// Euler's totient.
    pub fn phi(&self) -> u64 {
        self.parts.iter().map(|&(p, b)| (p - 1) * p.pow(b - 1)).product()
    }

    /// Möbius function.
    pub fn mobius(&self) -> i64 {
        if self.parts.iter().any(|&(_, b)| b > 1) {
            0
        } else if self.parts.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Carmichael's λ: the exponent of the unit group.
    pub fn carmichael(&self) -> u64 {
        self.parts.iter().fold(1, |acc, &(p, b)| {
            let local = if p == 2 && b >= 3 { 1 << (b - 2) } else { (p - 1) * p.pow(b - 1) };
            lcm(acc, local)
        })
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, b) in &self.parts {
            let current = divs.clone();
            let mut pk = 1;
            for _ in 0..b {
                pk *= p;
                divs.extend(current.iter().map(|d| d * pk));
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Trial-division factorization. `factor(1)` has no parts.
pub fn factor(n: u64) -> Factorization {
    assert!(n >= 1, "factor() needs a positive integer");
    let mut parts = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut b = 0;
            while m % p == 0 {
                m /= p;
                b += 1;
            }
            parts.push((p, b));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        parts.push((m, 1));
    }
    Factorization { value: n, parts }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `p^β` into `(p, β)`, failing when `q` is not a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let f = factor(q);
    match f.parts() {
        [(p, b)] => Ok((*p, *b)),
        _ => Err(Error::NotPrimePower(q)),
    }
}

/// `q* = ∏ p^⌈2β/3⌉`, the least integer whose cube is divisible by `q²`.
pub fn q_star(q: &Factorization) -> u64 {
    q.parts().iter().map(|&(p, b)| p.pow((2 * b).div_ceil(3))).product()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// p-adic valuation of a nonzero integer (`u32::MAX` for zero).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Signed valuation helper for integers that may be negative.
pub fn valuation_i(n: i64, p: u64) -> u32 {
    valuation(n.unsigned_abs(), p)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn rem_i(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Extended Euclid: returns `(g, x)` with `a·x ≡ g (mod m)`.
fn ext_gcd(a: i128, m: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// Inverse of `a` modulo `m`, if it exists. Every residue is invertible mod 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x) = ext_gcd((a % m) as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

/// Reduces `x` modulo each of `moduli`.
pub fn crt_split(x: u64, moduli: &[u64]) -> Vec<u64> {
    moduli.iter().map(|&m| x % m).collect()
}

/// The unique residue modulo `∏ moduli` with the given reductions.
pub fn crt_combine(residues: &[u64], moduli: &[u64]) -> Result<u64> {
    if residues.len() != moduli.len() {
        return Err(Error::Param("residue and modulus lists differ in length".into()));
    }
    let mut x = 0u64;
    let mut m = 1u64;
    for (&r, &mi) in residues.iter().zip(moduli) {
        if mi == 0 {
            return Err(Error::Param("zero modulus".into()));
        }
        let inv = inv_mod(m % mi, mi).ok_or(Error::NotCoprime(m, mi))?;
        // x + m·k ≡ r (mod mi)
        let diff = rem_i(r as i64 - (x % mi) as i64, mi);
        let k = mul_mod(diff, inv, mi);
        x += m * k;
        m *= mi;
    }
    Ok(x % m)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = rem_i(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Möbius function of an arbitrary positive integer.
pub fn mobius(n: u64) -> i64 {
    factor(n).mobius()
}

pub fn phi(n: u64) -> u64 {
    factor(n).phi()
}

/// Ramanujan sum `c_q(m) = Σ_{d | (m,q)} d·μ(q/d)`, exact.
pub fn ramanujan_sum(m: i64, q: u64) -> i64 {
    let g = gcd(m.unsigned_abs(), q);
    let g = if g == 0 { q } else { g };
    factor(g)
        .divisors()
        .into_iter()
        .map(|d| d as i64 * mobius(q / d))
        .sum()
}
