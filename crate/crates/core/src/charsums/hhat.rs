//! The two-variable sum
//! `S = Σ_{y,u mod p^β} χ̄(u p^{2(γ−β)} y + 1) χ(1 + p^{γ−β} y) χ(1 − p^{γ−β} u) ψ(u) ψ(y)`
//! for `χ` primitive modulo `p^γ` and `ψ` of conductor `p^β < p^γ`.

use num_complex::Complex64;

use crate::arith::{gcd, inv_mod, prime_power};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::report::Outcome;
use crate::sum::{pairwise_sum, CharSumValue};

/// Validates `(χ, ψ)` and returns `(p, γ, β)`.
pub fn hhat_params(chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<(u64, u32, u32)> {
    let (p, gamma) = prime_power(chi.modulus())?;
    let (p2, beta) = prime_power(psi.modulus())?;
    if p != p2 {
        return Err(Error::ModulusMismatch(chi.modulus(), psi.modulus()));
    }
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
    }
    if gamma < 2 || beta < 1 || beta >= gamma {
        return Err(Error::Precondition(format!("need γ ≥ 2 and 1 ≤ β < γ (γ = {gamma}, β = {beta})")));
    }
    if psi.conductor() != psi.modulus() {
        return Err(Error::Precondition(format!(
            "ψ must have conductor p^β = {} (has {})",
            psi.modulus(),
            psi.conductor()
        )));
    }
    Ok((p, gamma, beta))
}

/// `S = Σ_v ψ(v) W(v)` with `W(v) = χ̄(1 + p^{2s} v) Σ_y χ(1 + p^s y) χ(1 − p^s v ȳ)`,
/// `s = γ − β`, collecting `u = v ȳ`.
pub struct HhatKernel {
    pb: u64,
    weights: Vec<Complex64>,
    terms: u64,
}

impl HhatKernel {
    pub fn new(chi: &DirichletCharacter, beta: u32) -> Result<Self> {
        let (p, gamma) = prime_power(chi.modulus())?;
        if beta < 1 || beta >= gamma {
            return Err(Error::Precondition(format!("need 1 ≤ β < γ (γ = {gamma}, β = {beta})")));
        }
        let pg = chi.modulus();
        let pb = p.pow(beta);
        let ps = p.pow(gamma - beta);
        let ps2 = ps * ps % pg;
        let units: Vec<(u64, u64)> = (1..pb).filter(|&x| gcd(x, pb) == 1).map(|x| (x, inv_mod(x, pb).unwrap())).collect();
        let a: Vec<Complex64> = (0..pb).map(|y| chi.eval((1 + ps * y) % pg)).collect();
        let b: Vec<Complex64> = (0..pb).map(|u| chi.eval((1 + pg - ps * u % pg) % pg)).collect();
        let mut weights = vec![Complex64::new(0.0, 0.0); pb as usize];
        let mut buf = Vec::with_capacity(units.len());
        for &(v, _) in &units {
            buf.clear();
            buf.extend(units.iter().map(|&(y, yi)| a[y as usize] * b[(v * yi % pb) as usize]));
            let c = chi.eval((1 + ps2 * v) % pg).conj();
            weights[v as usize] = c * pairwise_sum(&buf);
        }
        let terms = (units.len() * units.len()) as u64;
        Ok(Self { pb, weights, terms })
    }

    pub fn eval(&self, psi: &DirichletCharacter) -> CharSumValue {
        debug_assert_eq!(psi.modulus(), self.pb);
        let buf: Vec<Complex64> = self.weights.iter().enumerate().map(|(v, &w)| w * psi.eval(v as u64)).collect();
        CharSumValue::new(pairwise_sum(&buf), self.terms)
    }
}

/// The defining double sum, term by term.
pub fn hhat_sum_direct(chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<CharSumValue> {
    let (p, gamma, beta) = hhat_params(chi, psi)?;
    let pg = chi.modulus();
    let pb = p.pow(beta);
    let ps = p.pow(gamma - beta);
    let mut terms = Vec::new();
    for y in 0..pb {
        for u in 0..pb {
            let v = chi.eval((u * ps % pg * ps % pg * y % pg + 1) % pg).conj()
                * chi.eval((1 + ps * y) % pg)
                * chi.eval((1 + pg - ps * u % pg) % pg)
                * psi.eval(u)
                * psi.eval(y);
            terms.push(v);
        }
    }
    Ok(CharSumValue::new(pairwise_sum(&terms), pb * pb))
}

/// `S` together with the check `|S| ≤ p^β + tol`.
pub fn lemma_hhat_sum(chi: &DirichletCharacter, psi: &DirichletCharacter, tol_unit: f64) -> Result<(CharSumValue, Outcome)> {
    let (p, _, beta) = hhat_params(chi, psi)?;
    let s = HhatKernel::new(chi, beta)?.eval(psi);
    let o = Outcome::at_most(s.abs(), p.pow(beta) as f64, s.tol_with(tol_unit));
    Ok((s, o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, CharacterFilter};

    #[test]
    fn kernel_matches_direct() {
        for (pg, pb) in [(27u64, 9u64), (27, 3), (125, 25), (32, 4), (32, 8)] {
            let prims = enumerate_characters(pg, CharacterFilter::Primitive);
            let psis = enumerate_characters(pb, CharacterFilter::Primitive);
            for chi in prims.iter().step_by(5) {
                let (_, _, beta) = hhat_params(chi, &psis[0]).unwrap();
                let k = HhatKernel::new(chi, beta).unwrap();
                for psi in psis.iter().step_by(3) {
                    assert!(k.eval(psi).agrees_with(&hhat_sum_direct(chi, psi).unwrap()));
                }
            }
        }
    }

    #[test]
    fn bound_p3() {
        let psis = enumerate_characters(9, CharacterFilter::Primitive);
        for chi in enumerate_characters(27, CharacterFilter::Primitive) {
            for psi in &psis {
                assert!(lemma_hhat_sum(&chi, psi, 1e-9).unwrap().1.pass);
            }
        }
    }

    #[test]
    fn preconditions() {
        let chi = &enumerate_characters(27, CharacterFilter::Primitive)[0];
        let imprim = enumerate_characters(9, CharacterFilter::All).into_iter().find(|c| !c.is_primitive()).unwrap();
        assert!(matches!(lemma_hhat_sum(chi, &imprim, 1e-9), Err(Error::Precondition(_))));
        let same = &enumerate_characters(27, CharacterFilter::Primitive)[1];
        assert!(lemma_hhat_sum(chi, same, 1e-9).is_err());
    }
}
