//! Gauss sums `τ(χ, n)` of possibly imprimitive characters.

use num_complex::Complex64;
use serde_json::json;

use crate::arith::{factor, gcd, mobius, prime_power, rem_i, valuation};
use crate::characters::{enumerate_characters, CharacterFilter, DirichletCharacter};
use crate::error::Result;
use crate::report::{Outcome, SweepReport, Tally};
use crate::sum::{pairwise_sum, CharSumValue, Roots};

/// `τ(χ, n) = Σ_{x mod q} χ(x) e_q(n x)` by direct summation.
pub fn gauss_sum(chi: &DirichletCharacter, n: i64) -> CharSumValue {
    let q = chi.modulus();
    let roots = Roots::new(q);
    let n = rem_i(n, q);
    let table = chi.table();
    let croots = chi.group().roots();
    let terms: Vec<Complex64> = (0..q)
        .filter_map(|x| table.exp(x).map(|k| croots.get(k) * roots.get(n * x % q)))
        .collect();
    CharSumValue::new(pairwise_sum(&terms), terms.len() as u64)
}

/// All `τ(χ, n)` for `n mod q`, computed together.
#[derive(Clone, Debug)]
pub struct GaussTable {
    modulus: u64,
    terms: u64,
    values: Vec<Complex64>,
}

impl GaussTable {
    pub fn new(chi: &DirichletCharacter) -> Self {
        let q = chi.modulus();
        let roots = Roots::new(q);
        let table = chi.table();
        let croots = chi.group().roots();
        let support: Vec<(u64, Complex64)> =
            (0..q).filter_map(|x| table.exp(x).map(|k| (x, croots.get(k)))).collect();
        let mut buf = Vec::with_capacity(support.len());
        let values = (0..q)
            .map(|n| {
                buf.clear();
                buf.extend(support.iter().map(|&(x, v)| v * roots.get(n * x % q)));
                pairwise_sum(&buf)
            })
            .collect();
        Self { modulus: q, terms: support.len() as u64, values }
    }

    pub fn get(&self, n: i64) -> CharSumValue {
        CharSumValue::new(self.values[rem_i(n, self.modulus) as usize], self.terms)
    }
}

/// Right side of the exact formula for `τ(χ, n)` in terms of the Gauss sum
/// `tau_prim` of the primitive character inducing `χ`.
///
/// For trivial `χ` the value is the Ramanujan sum `S(n, 0; q)`.
pub fn gauss_structural(chi: &DirichletCharacter, n: i64, tau_prim: Complex64) -> Complex64 {
    let q = chi.modulus();
    if chi.is_trivial() {
        return Complex64::new(crate::arith::ramanujan_sum(n, q) as f64, 0.0);
    }
    let prim = chi.primitive_inducing();
    let qp = prim.modulus();
    // representative of n in [1, q]
    let n = match rem_i(n, q) {
        0 => q,
        r => r,
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for d in factor(gcd(n, q / qp)).divisors() {
        let m = q / (d * qp);
        let mu = mobius(m);
        if mu == 0 {
            continue;
        }
        acc += prim.eval((n / d) % qp).conj() * prim.eval(m % qp) * (d as f64 * mu as f64);
    }
    tau_prim * acc
}

/// `(q')^{1/2} (n, q/q')` with `q'` the conductor.
pub fn gauss_bound(chi: &DirichletCharacter, n: i64) -> f64 {
    let q = chi.modulus();
    let qp = chi.conductor();
    let g = gcd(rem_i(n, q), q / qp);
    (qp as f64).sqrt() * g as f64
}

/// Whether `τ(χ)τ(χ, n)` may be nonzero for `χ` modulo a prime power.
pub fn gauss_product_exception(chi: &DirichletCharacter, n: i64) -> Result<bool> {
    let q = chi.modulus();
    let (p, _) = prime_power(q)?;
    let qp = chi.conductor();
    Ok((qp == q && rem_i(n, p) != 0) || (qp == 1 && q == p))
}

/// Brute force against the exact formula for one `(χ, n)`.
pub fn check_formula(chi: &DirichletCharacter, table: &GaussTable, tau_prim: Complex64, n: i64, tol_unit: f64) -> Outcome {
    let lhs = table.get(n);
    let rhs = gauss_structural(chi, n, tau_prim);
    Outcome::close(lhs.value, rhs, lhs.tol_with(tol_unit))
}

/// [`check_formula`] from scratch, for replay.
pub fn check_formula_at(chi: &DirichletCharacter, n: i64, tol_unit: f64) -> Outcome {
    let tau_prim = gauss_sum(&chi.primitive_inducing(), 1).value;
    check_formula(chi, &GaussTable::new(chi), tau_prim, n, tol_unit)
}

pub fn check_bound(chi: &DirichletCharacter, table: &GaussTable, n: i64, tol_unit: f64) -> Outcome {
    let v = table.get(n);
    Outcome::at_most(v.abs(), gauss_bound(chi, n), v.tol_with(tol_unit))
}

pub fn check_bound_at(chi: &DirichletCharacter, n: i64, tol_unit: f64) -> Outcome {
    check_bound(chi, &GaussTable::new(chi), n, tol_unit)
}

/// The product `τ(χ)τ(χ, n)` vanishes exactly outside the two exceptions,
/// and is nonzero inside them.
pub fn check_vanishing(chi: &DirichletCharacter, table: &GaussTable, n: i64, tol_unit: f64) -> Result<Outcome> {
    let t1 = table.get(1);
    let tn = table.get(n);
    let product = t1.value * tn.value;
    let tol = tol_unit * (t1.terms as f64) * (1.0 + t1.abs().max(tn.abs()));
    let nonzero = product.norm() > tol;
    Ok(Outcome::flag(nonzero, gauss_product_exception(chi, n)?))
}

pub fn check_vanishing_at(chi: &DirichletCharacter, n: i64, tol_unit: f64) -> Result<Outcome> {
    check_vanishing(chi, &GaussTable::new(chi), n, tol_unit)
}

/// Vanishing taxonomy of `τ(χ)τ(χ, n)` for every `χ` and `n` modulo `p^β`.
pub fn gauss_vanishing_check(pb: u64) -> Result<SweepReport> {
    gauss_vanishing_sweep(pb, crate::sum::TOL_UNIT)
}

pub fn gauss_vanishing_sweep(pb: u64, tol_unit: f64) -> Result<SweepReport> {
    let (p, _) = prime_power(pb)?;
    debug_assert!(valuation(pb, p) >= 1);
    let mut tally = Tally::default();
    for chi in enumerate_characters(pb, CharacterFilter::All) {
        let table = GaussTable::new(&chi);
        for n in 0..pb as i64 {
            let o = check_vanishing(&chi, &table, n, tol_unit)?;
            tally.record("gauss.vanishing", o, || json!({ "chi": chi, "n": n, "tol": tol_unit }));
        }
    }
    let mut report = SweepReport::new("gauss.vanishing").with_param("modulus", pb);
    report.absorb(tally);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::DirichletGroup;

    #[test]
    fn examples() {
        let chi = &enumerate_characters(5, CharacterFilter::Primitive)[0];
        assert!((gauss_sum(chi, 1).abs() - 5f64.sqrt()).abs() < 1e-12);
        let triv6 = DirichletGroup::get(6).trivial();
        assert!((gauss_sum(&triv6, 1).value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // induced from the quadratic character mod 3: τ(χ) = μ(3)χ'(3)τ(χ') = 0
        let induced = enumerate_characters(9, CharacterFilter::All).into_iter().find(|c| c.conductor() == 3).unwrap();
        assert!(gauss_sum(&induced, 1).abs() < 1e-12);
        let triv3 = DirichletGroup::get(3).trivial();
        assert!((gauss_sum(&triv3, 1).value.re + 1.0).abs() < 1e-12);
        for chi in enumerate_characters(9, CharacterFilter::Primitive) {
            assert!(gauss_sum(&chi, 3).abs() < 1e-12);
        }
    }

    #[test]
    fn table_matches_direct() {
        for chi in enumerate_characters(20, CharacterFilter::All) {
            let t = GaussTable::new(&chi);
            for n in -3..25 {
                assert!(t.get(n).agrees_with(&gauss_sum(&chi, n)));
            }
        }
    }

    #[test]
    fn formula_small_moduli() {
        for q in 1..60 {
            for chi in enumerate_characters(q, CharacterFilter::All) {
                let table = GaussTable::new(&chi);
                let tau_prim = gauss_sum(&chi.primitive_inducing(), 1).value;
                for n in 0..q as i64 {
                    assert!(check_formula(&chi, &table, tau_prim, n, 1e-9).pass, "{chi:?} n={n}");
                    assert!(check_bound(&chi, &table, n, 1e-9).pass, "{chi:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn vanishing_prime_powers() {
        for pb in [2u64, 3, 4, 8, 9, 16, 25, 27, 49] {
            let r = gauss_vanishing_check(pb).unwrap();
            assert!(r.passed(), "{pb}: {:?}", r.failures.first());
            assert_eq!(r.checks, crate::arith::phi(pb) * pb);
        }
    }
}
