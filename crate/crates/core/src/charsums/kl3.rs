//! Hyper-Kloosterman sums `Kl₃(a, b, c; q)` and their expansion in Gauss sums.

use num_complex::Complex64;

use crate::arith::{factor, gcd, inv_mod, rem_i};
use crate::characters::{enumerate_characters, CharacterFilter, DirichletCharacter};
use crate::charsums::gauss::GaussTable;
use crate::report::Outcome;
use crate::sum::{pairwise_sum, CharSumValue, RootHistogram, Roots};

fn units(q: u64) -> Vec<u64> {
    (0..q).filter(|&x| gcd(x, q) == 1).collect()
}

/// `Σ_{xyz ≡ 1} e_q(ax + by + cz)`, summing over `x, y` with `z = (xy)⁻¹`.
pub fn kl3(a: i64, b: i64, c: i64, q: u64) -> CharSumValue {
    assert!(q >= 1, "modulus must be positive");
    let (a, b, c) = (rem_i(a, q), rem_i(b, q), rem_i(c, q));
    let us = units(q);
    let mut hist = RootHistogram::new(q);
    for &x in &us {
        let ax = a * x % q;
        for &y in &us {
            let z = inv_mod(x * y % q, q).expect("product of units");
            hist.add((ax + b * y % q + c * z % q) % q, 1);
        }
    }
    CharSumValue::new(hist.evaluate(&Roots::new(q)), (us.len() * us.len()) as u64)
}

/// `n = n₀ n'` with `n₀ | q^∞` and `(n', q) = 1`; `n = 0` is replaced by
/// its representative `q`. The cofactor is returned reduced mod `q`.
pub fn split_supported(n: i64, q: u64) -> (u64, u64) {
    let mut rest = if n == 0 { q } else { n.unsigned_abs() };
    let negative = n < 0;
    let mut n0 = 1;
    for &(p, _) in factor(q).parts() {
        while rest % p == 0 {
            rest /= p;
            n0 *= p;
        }
    }
    let rest = rem_i(if negative { -(rest as i64) } else { rest as i64 }, q);
    (n0, rest)
}

/// Gauss tables `τ(η̄, ·)` for every `η` modulo `q`, for repeated expansions.
pub struct Kl3Expander {
    modulus: u64,
    chars: Vec<(DirichletCharacter, GaussTable)>,
}

impl Kl3Expander {
    pub fn new(q: u64) -> Self {
        let chars = enumerate_characters(q, CharacterFilter::All)
            .into_iter()
            .map(|eta| {
                let t = GaussTable::new(&eta.conj());
                (eta, t)
            })
            .collect();
        Self { modulus: q, chars }
    }

    /// `φ(q)⁻¹ Σ_η τ(η̄, a₀) τ(η̄, b₀) τ(η̄, c₀) η(a'b'c')`.
    pub fn eval(&self, a: i64, b: i64, c: i64) -> CharSumValue {
        let q = self.modulus;
        let (a0, a1) = split_supported(a, q);
        let (b0, b1) = split_supported(b, q);
        let (c0, c1) = split_supported(c, q);
        let unit = (a1 as u128 * b1 as u128 % q as u128 * c1 as u128 % q as u128) as u64;
        let terms: Vec<Complex64> = self
            .chars
            .iter()
            .map(|(eta, t)| {
                t.get(a0 as i64).value * t.get(b0 as i64).value * t.get(c0 as i64).value * eta.eval(unit)
            })
            .collect();
        let phi = self.chars.len() as f64;
        let per = self.chars.first().map_or(1, |(_, t)| t.get(0).terms);
        CharSumValue::new(pairwise_sum(&terms) / phi, terms.len() as u64 * per.pow(3))
    }
}

pub fn kl3_expansion(a: i64, b: i64, c: i64, q: u64) -> CharSumValue {
    Kl3Expander::new(q).eval(a, b, c)
}

/// Brute force against the expansion; sweeps pass representatives in `[1, q]`.
pub fn check_expansion(exp: &Kl3Expander, a: i64, b: i64, c: i64, tol_unit: f64) -> Outcome {
    let lhs = kl3(a, b, c, exp.modulus);
    let rhs = exp.eval(a, b, c);
    Outcome::close(lhs.value, rhs.value, lhs.tol_with(tol_unit).max(rhs.tol_with(tol_unit)))
}
