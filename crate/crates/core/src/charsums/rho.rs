//! `ρ(Δ, p^β)`: the number of square roots of `Δ` modulo `p^β`.

use crate::arith::{legendre, rem_i, valuation};
use crate::error::{Error, Result};
use crate::report::Outcome;

/// Counts `x mod p^β` with `x² ≡ Δ` by scanning.
pub fn rho_brute(delta: i64, p: u64, beta: u32) -> u64 {
    let m = p.pow(beta);
    let d = rem_i(delta, m);
    (0..m).filter(|&x| x * x % m == d).count() as u64
}

/// Square-root counts for every residue modulo `p^β` at once.
pub fn rho_histogram(p: u64, beta: u32) -> Vec<u64> {
    let m = p.pow(beta);
    let mut counts = vec![0u64; m as usize];
    for x in 0..m {
        counts[(x * x % m) as usize] += 1;
    }
    counts
}

/// Exact count for odd `p`.
///
/// Three cases: `p ∤ Δ` gives `1 + (Δ/p)`; `p^β | Δ` gives `p^{⌊β/2⌋}`;
/// otherwise, with `Δ = p^a Δ'` and `0 < a < β`, the count is `0` for odd `a`
/// and `p^{a/2}(1 + (Δ'/p))` for even `a`.
pub fn rho(delta: i64, p: u64, beta: u32) -> Result<u64> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let m = p.pow(beta);
    let d = rem_i(delta, m);
    if d == 0 {
        return Ok(p.pow(beta / 2));
    }
    let a = valuation(d, p);
    if a % 2 == 1 {
        return Ok(0);
    }
    let unit = d / p.pow(a);
    Ok(p.pow(a / 2) * (1 + legendre(unit as i64, p)) as u64)
}

/// The bound stated for the intermediate case, `2 (Δ, p^β)^{1/2}` when the gcd
/// is a square and `0` otherwise; the exact value in the other two cases.
pub fn rho_lemma_bound(delta: i64, p: u64, beta: u32) -> Result<f64> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let m = p.pow(beta);
    let d = rem_i(delta, m);
    if d == 0 || d % p != 0 {
        return rho(delta, p, beta).map(|r| r as f64);
    }
    let a = valuation(d, p);
    Ok(if a % 2 == 0 { 2.0 * (p.pow(a) as f64).sqrt() } else { 0.0 })
}

pub fn check_exact(delta: i64, p: u64, beta: u32) -> Result<Outcome> {
    Ok(Outcome::exact(rho_brute(delta, p, beta) as i64, rho(delta, p, beta)? as i64))
}

pub fn check_lemma_bound(delta: i64, p: u64, beta: u32) -> Result<Outcome> {
    Ok(Outcome::at_most(rho_brute(delta, p, beta) as f64, rho_lemma_bound(delta, p, beta)?, 0.0))
}
