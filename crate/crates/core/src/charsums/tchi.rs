//! `T_χ(h, m, n) = Σ*_{x, y mod q} χ(x + h) χ̄(x) e_q(m x ȳ + n y)` and its
//! evaluation through Ramanujan sums and `Kl₃`.

use std::collections::HashMap;

use num_complex::Complex64;
use serde_json::json;

use crate::arith::{factor, gcd, inv_mod, ramanujan_sum, rem_i, valuation};
use crate::characters::{conductor_drop_index, DirichletCharacter};
use crate::charsums::kl3::kl3;
use crate::error::{Error, Result};
use crate::report::{Outcome, Tally};
use crate::sum::{pairwise_sum, CharSumValue, Roots};

/// `T_χ(h, m, n)` by the defining double sum.
pub fn tchi(chi: &DirichletCharacter, h: i64, m: i64, n: i64) -> CharSumValue {
    let q = chi.modulus();
    let (h, m, n) = (rem_i(h, q), rem_i(m, q), rem_i(n, q));
    let roots = Roots::new(q);
    let units: Vec<(u64, u64)> =
        (0..q).filter(|&x| gcd(x, q) == 1).map(|x| (x, inv_mod(x, q).expect("unit"))).collect();
    let mut terms = Vec::with_capacity(units.len() * units.len());
    for &(x, _) in &units {
        let a = chi.eval((x + h) % q) * chi.eval(x).conj();
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for &(y, yi) in &units {
            terms.push(a * roots.get((m * (x * yi % q) + n * y) % q));
        }
    }
    CharSumValue::new(pairwise_sum(&terms), (units.len() * units.len()) as u64)
}

/// All `T_χ(h, m, n)` for fixed `(χ, h)`, as a `q × q` table.
///
/// With `u = x ȳ` the sum is a two-dimensional Fourier transform of
/// `A(uy) = χ(uy + h) χ̄(uy)`, done one axis at a time.
pub struct TchiTable {
    modulus: u64,
    terms: u64,
    values: Vec<Complex64>,
}

impl TchiTable {
    pub fn new(chi: &DirichletCharacter, h: i64) -> Self {
        let q = chi.modulus();
        let h = rem_i(h, q);
        let qs = q as usize;
        let roots = Roots::new(q);
        let units: Vec<u64> = (0..q).filter(|&x| gcd(x, q) == 1).collect();
        let a: Vec<Complex64> = (0..q).map(|x| chi.eval((x + h) % q) * chi.eval(x).conj()).collect();
        // c[u][n] = Σ_y A(uy) e_q(ny)
        let mut c = vec![Complex64::new(0.0, 0.0); qs * qs];
        let mut buf = Vec::with_capacity(units.len());
        for &u in &units {
            for n in 0..q {
                buf.clear();
                buf.extend(units.iter().map(|&y| a[(u * y % q) as usize] * roots.get(n * y % q)));
                c[u as usize * qs + n as usize] = pairwise_sum(&buf);
            }
        }
        let mut values = vec![Complex64::new(0.0, 0.0); qs * qs];
        for m in 0..q {
            for n in 0..q {
                buf.clear();
                buf.extend(units.iter().map(|&u| roots.get(m * u % q) * c[u as usize * qs + n as usize]));
                values[m as usize * qs + n as usize] = pairwise_sum(&buf);
            }
        }
        let terms = (units.len() * units.len()) as u64;
        Self { modulus: q, terms, values }
    }

    pub fn get(&self, m: i64, n: i64) -> CharSumValue {
        let q = self.modulus;
        CharSumValue::new(self.values[(rem_i(m, q) * q + rem_i(n, q)) as usize], self.terms)
    }
}

/// Parameters `(d, h)` admitted by the structural checks: `d | q`, `q | d²`,
/// and `h ∈ [1, q]` a multiple of `d`. Pairs sharing `h` are listed once per
/// `d`.
pub fn admissible(q: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for d in factor(q).divisors() {
        if (d * d) % q != 0 {
            continue;
        }
        for h in (d..=q).step_by(d as usize) {
            out.push((d, h));
        }
    }
    out
}

/// Unitary splittings `q = q₁ q₂`, `(q₁, q₂) = 1`, `1 < q₁ < q`.
fn unitary_splits(q: u64) -> Vec<(u64, u64)> {
    let pp: Vec<u64> = factor(q).prime_powers().collect();
    let k = pp.len();
    (1..(1u32 << k) - 1)
        .map(|mask| {
            let q1: u64 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| pp[i]).product();
            (q1, q / q1)
        })
        .collect()
}

/// `χ` restricted to the coprime factor `r` of its modulus.
fn restrict(chi: &DirichletCharacter, r: u64) -> Result<DirichletCharacter> {
    let parts: Vec<DirichletCharacter> =
        factor(r).parts().iter().map(|&(p, _)| chi.component(p).expect("p divides q")).collect();
    if parts.is_empty() {
        return Ok(crate::characters::DirichletGroup::get(1).trivial());
    }
    DirichletCharacter::from_components(&parts)
}

/// Cache of `Kl₃` values keyed by `(a, b, c, modulus)`.
#[derive(Default)]
struct Kl3Cache(HashMap<(u64, u64, u64, u64), CharSumValue>);

impl Kl3Cache {
    fn get(&mut self, a: i64, b: i64, c: i64, m: u64) -> CharSumValue {
        let key = (rem_i(a, m), rem_i(b, m), rem_i(c, m), m);
        *self.0.entry(key).or_insert_with(|| kl3(a, b, c, m))
    }
}

fn close(lhs: &CharSumValue, rhs: Complex64, tol_unit: f64) -> Outcome {
    let tol = lhs.tol_with(tol_unit).max(crate::sum::tolerance_with(tol_unit, lhs.terms, rhs.norm()));
    Outcome::close(lhs.value, rhs, tol)
}

/// Units used for the free parameter `c` of the factorized evaluation.
fn c_values(q: u64) -> Vec<u64> {
    let mut out = vec![1];
    if let Some(c) = (2..q.max(2) + 1).find(|&c| gcd(c, q) == 1 && c % q != 1) {
        out.push(c);
    }
    out
}

/// Every structural statement about `T_χ(h, ·, ·)` for one admissible
/// `(d, h)`, over all `(m, n) mod q`.
pub fn tchi_structural_check(chi: &DirichletCharacter, d: u64, h: u64, tol_unit: f64) -> Result<Tally> {
    let q = chi.modulus();
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: q, conductor: chi.conductor() });
    }
    if d == 0 || q % d != 0 || (d * d) % q != 0 {
        return Err(Error::Precondition(format!("need d | q and q | d² (q = {q}, d = {d})")));
    }
    if h == 0 || h % d != 0 {
        return Err(Error::Precondition(format!("need d | h (d = {d}, h = {h})")));
    }
    let qi = q as i64;
    let hi = h as i64;
    let table = TchiTable::new(chi, hi);
    let mut tally = Tally::default();
    let mut cache = Kl3Cache::default();
    let inputs = |m: i64, n: i64| json!({ "chi": chi, "d": d, "h": h, "m": m, "n": n, "tol": tol_unit });

    for m in 0..qi {
        for n in 0..qi {
            let t = table.get(m, n);
            tally.record("tchi.symmetry", close(&t, table.get(n, m).value, tol_unit), || inputs(m, n));
        }
    }

    for (q1, q2) in unitary_splits(q) {
        let c1 = restrict(chi, q1)?;
        let c2 = restrict(chi, q2)?;
        let t1 = TchiTable::new(&c1, hi);
        let t2 = TchiTable::new(&c2, hi);
        let q2i = inv_mod(q2 % q1, q1).unwrap() as i64;
        let q1i = inv_mod(q1 % q2, q2).unwrap() as i64;
        for m in 0..qi {
            for n in 0..qi {
                let rhs = t1.get(m * q2i, n * q2i).value * t2.get(m * q1i, n * q1i).value;
                tally.record("tchi.crt", close(&table.get(m, n), rhs, tol_unit), || {
                    let mut v = inputs(m, n);
                    v["q1"] = json!(q1);
                    v
                });
            }
        }
    }

    let hq = gcd(h, q);
    if h % q == 0 {
        for m in 0..qi {
            for n in 0..qi {
                let rhs = (ramanujan_sum(m, q) * ramanujan_sum(n, q)) as f64;
                tally.record("tchi.divisible", close(&table.get(m, n), Complex64::new(rhs, 0.0), tol_unit), || {
                    inputs(m, n)
                });
            }
        }
    }
    let intermediate = factor(q).parts().iter().all(|&(p, b)| valuation(h, p) < b);
    if intermediate {
        let ell = conductor_drop_index(chi, h)? as i64;
        let hp = (h / hq) as i64;
        let modulus = q / hq;
        for m in 0..qi {
            for n in 0..qi {
                let t = table.get(m, n);
                let divides = gcd(m as u64, hq) == hq && gcd(n as u64, hq) == hq;
                let rhs = if divides {
                    let k = cache.get(ell * hp, m / hq as i64, n / hq as i64, modulus);
                    k.value * (hq * hq) as f64
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let name = if divides { "tchi.kl3" } else { "tchi.vanishing" };
                tally.record(name, close(&t, rhs, tol_unit), || inputs(m, n));
            }
        }
    }

    // q = q₁ q₂ split by comparing v_p(q) with v_p(h)
    let (mut q1, mut q2) = (1u64, 1u64);
    for &(p, b) in factor(q).parts() {
        if b <= valuation(h, p) {
            q1 *= p.pow(b);
        } else {
            q2 *= p.pow(b);
        }
    }
    let hq2 = gcd(h, q2);
    let hp = (h / hq2) as i64;
    let m2 = q2 / hq2;
    let ell2 = if q2 > 1 { conductor_drop_index(&restrict(chi, q2)?, h)? as i64 } else { 0 };
    for c in c_values(q) {
        let cbar = inv_mod(c, q).unwrap() as i64;
        let cq1bar = inv_mod(c * q1 % m2, m2).unwrap() as i64;
        let step = hq2 as i64;
        for n1 in 0..(q / hq2) as i64 {
            for n2 in 0..(q / hq2) as i64 {
                let t = table.get(cbar * step * n1, cbar * step * n2);
                let k = cache.get(ell2 * hp, cq1bar * n1, cq1bar * n2, m2);
                let rs = (ramanujan_sum(n1, q1) * ramanujan_sum(n2, q1)) as f64;
                let rhs = k.value * (rs * (hq2 * hq2) as f64);
                tally.record("tchi.corollary", close(&t, rhs, tol_unit), || {
                    let mut v = inputs(n1, n2);
                    v["c"] = json!(c);
                    v
                });
            }
        }
    }
    for m in 0..qi {
        for n in 0..qi {
            if gcd(m as u64, hq2) == hq2 && gcd(n as u64, hq2) == hq2 {
                continue;
            }
            tally.record("tchi.corollary_vanishing", close(&table.get(m, n), Complex64::new(0.0, 0.0), tol_unit), || {
                inputs(m, n)
            });
        }
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, CharacterFilter};

    #[test]
    fn examples() {
        let chi = &enumerate_characters(9, CharacterFilter::Primitive)[0];
        assert!(tchi(chi, 9, 1, 1).abs() < 1e-12);
        assert!(tchi(chi, 3, 1, 2).agrees_with(&tchi(chi, 3, 2, 1)));
        assert!(tchi(chi, 3, 1, 1).abs() < 1e-12);
        let t = tchi(chi, 3, 3, 6);
        let ell = conductor_drop_index(chi, 3).unwrap() as i64;
        assert!((t.value - kl3(ell, 1, 2, 3).value * 9.0).norm() < 1e-9);
    }

    #[test]
    fn table_matches_direct() {
        for q in [9u64, 12, 25] {
            for chi in enumerate_characters(q, CharacterFilter::All).iter().step_by(3) {
                for h in [1i64, 3, 5] {
                    let t = TchiTable::new(chi, h);
                    for (m, n) in [(0, 0), (1, 2), (3, 3), (5, 7), (q as i64 - 1, 2)] {
                        assert!(t.get(m, n).agrees_with(&tchi(chi, h, m, n)));
                    }
                }
            }
        }
    }

    #[test]
    fn admissible_params() {
        assert_eq!(admissible(9), vec![(3, 3), (3, 6), (3, 9), (9, 9)]);
        assert!(admissible(45).contains(&(15, 30)));
    }

    #[test]
    fn structural_small() {
        for q in [9u64, 45] {
            for chi in enumerate_characters(q, CharacterFilter::Primitive).iter().take(3) {
                for (d, h) in admissible(q) {
                    let t = tchi_structural_check(chi, d, h, 1e-9).unwrap();
                    assert_eq!(t.failed, 0, "{chi} d={d} h={h}: {:?}", t.failures.first());
                }
            }
        }
    }

    #[test]
    fn crt_composite_moduli() {
        for q in [15u64, 21, 36, 45, 63, 100] {
            for chi in enumerate_characters(q, CharacterFilter::All).iter().step_by(5) {
                for h in [1u64, 3, 7, q] {
                    let t = TchiTable::new(chi, h as i64);
                    for (q1, q2) in unitary_splits(q) {
                        let t1 = TchiTable::new(&restrict(chi, q1).unwrap(), h as i64);
                        let t2 = TchiTable::new(&restrict(chi, q2).unwrap(), h as i64);
                        let a = inv_mod(q2 % q1, q1).unwrap() as i64;
                        let b = inv_mod(q1 % q2, q2).unwrap() as i64;
                        for (m, n) in [(1i64, 1i64), (2, 5), (0, 3)] {
                            let rhs = t1.get(m * a, n * a).value * t2.get(m * b, n * b).value;
                            assert!((t.get(m, n).value - rhs).norm() < 1e-8, "q={q} h={h}");
                        }
                    }
                }
            }
        }
    }
}
