//! Dirichlet L-values through Hurwitz zeta, `L(s, χ) = q^{−s} Σ_a χ(a) ζ(s, a/q)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, gcd};
use crate::characters::DirichletCharacter;
use crate::charsums::gauss::gauss_sum;
use crate::error::{Error, Result};
use crate::lfunc::gamma::gamma_ratio;
use crate::lfunc::hurwitz::hurwitz_zeta_est;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub s: Complex64,
    pub character: DirichletCharacter,
    pub value: Complex64,
    pub est_error: f64,
}

/// `ζ(s, a/q)` for every unit `a` modulo `q`, shared by all characters mod `q`.
pub struct HurwitzTable {
    modulus: u64,
    s: Complex64,
    scale: Complex64,
    values: Vec<Complex64>,
    errors: Vec<f64>,
}

impl HurwitzTable {
    pub fn new(q: u64, s: Complex64) -> Result<Self> {
        if s == Complex64::new(1.0, 0.0) {
            return Err(Error::Pole);
        }
        let mut values = vec![Complex64::new(0.0, 0.0); q as usize + 1];
        let mut errors = vec![0.0; q as usize + 1];
        for a in 1..=q {
            if gcd(a, q) == 1 {
                let (v, e) = hurwitz_zeta_est(s, a as f64 / q as f64)?;
                values[a as usize] = v;
                errors[a as usize] = e;
            }
        }
        let scale = (-s * (q as f64).ln()).exp();
        Ok(Self { modulus: q, s, scale, values, errors })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn l_value(&self, chi: &DirichletCharacter) -> Result<LValue> {
        if chi.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(chi.modulus(), self.modulus));
        }
        let values = chi.table().values(chi.group().roots());
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 1..=self.modulus {
            acc += values[(a % self.modulus) as usize] * self.values[a as usize];
        }
        let err: f64 = self.errors.iter().sum();
        let scale = self.scale.norm();
        Ok(LValue { s: self.s, character: chi.clone(), value: acc * self.scale, est_error: err * scale })
    }
}

pub fn dirichlet_l(s: Complex64, chi: &DirichletCharacter) -> Result<LValue> {
    HurwitzTable::new(chi.modulus(), s)?.l_value(chi)
}

/// Root number `τ(χ) / (i^κ √q)` of a primitive character.
pub fn root_number(chi: &DirichletCharacter) -> Result<Complex64> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() });
    }
    let tau = gauss_sum(chi, 1).value;
    let ik = if chi.is_even() { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
    Ok(tau / (ik * (chi.modulus() as f64).sqrt()))
}

/// `|L(s, χ) − ε (q/π)^{1/2−s} Γ((1−s+κ)/2)/Γ((s+κ)/2) L(1−s, χ̄)|`, the
/// completed functional equation divided through by the gamma factor at `s`.
pub fn functional_equation_residual(chi: &DirichletCharacter, s: Complex64) -> Result<f64> {
    let eps = root_number(chi)?;
    let kappa = if chi.is_even() { 0.0 } else { 1.0 };
    let q = chi.modulus() as f64;
    let lhs = dirichlet_l(s, chi)?.value;
    let one = Complex64::new(1.0, 0.0);
    let dual = dirichlet_l(one - s, &chi.conj())?.value;
    let factor = (Complex64::new(0.5, 0.0) - s) * (q / std::f64::consts::PI).ln();
    let rhs = eps * factor.exp() * gamma_ratio((one - s + kappa) * 0.5, (s + kappa) * 0.5) * dual;
    Ok((lhs - rhs).norm())
}

/// `|L(s, χ) − L(s, χ′) ∏_{p|q} (1 − χ′(p) p^{−s})|` with `χ′` inducing `χ`.
pub fn euler_factor_residual(chi: &DirichletCharacter, s: Complex64) -> Result<f64> {
    let prim = chi.primitive_inducing();
    let mut rhs = dirichlet_l(s, &prim)?.value;
    for &(p, _) in factor(chi.modulus()).parts() {
        let ps = (-s * (p as f64).ln()).exp();
        rhs *= Complex64::new(1.0, 0.0) - prim.eval(p) * ps;
    }
    Ok((dirichlet_l(s, chi)?.value - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, CharacterFilter, DirichletGroup};

    fn quadratic(q: u64) -> DirichletCharacter {
        enumerate_characters(q, CharacterFilter::Primitive).into_iter().find(|c| c.order() == 2).unwrap()
    }

    #[test]
    fn oracle_values() {
        // reference values from mpmath at 30 digits
        let z = dirichlet_l(Complex64::new(0.5, 0.0), &DirichletGroup::get(1).trivial()).unwrap();
        assert!((z.value.re + 1.4603545088095868).abs() < 1e-12);
        let l3 = dirichlet_l(Complex64::new(0.5, 0.0), &quadratic(3)).unwrap();
        assert!((l3.value - Complex64::new(0.4808675576968286, 0.0)).norm() < 1e-12);
        let l5 = dirichlet_l(Complex64::new(0.5, 7.0), &quadratic(5)).unwrap();
        assert!((l5.value - Complex64::new(0.2923233613066366, 0.476_115_086_393_775_2)).norm() < 1e-12);
        assert!(l5.est_error < 1e-10);
    }

    #[test]
    fn pole() {
        let triv = DirichletGroup::get(7).trivial();
        assert!(matches!(dirichlet_l(Complex64::new(1.0, 0.0), &triv), Err(Error::Pole)));
    }

    #[test]
    fn functional_equation_small() {
        for q in [1u64, 3, 4, 5, 7, 8, 9, 12, 16, 25] {
            for chi in enumerate_characters(q, CharacterFilter::Primitive) {
                for t in [0.0, 1.0, 5.0] {
                    let r = functional_equation_residual(&chi, Complex64::new(0.5, t)).unwrap();
                    assert!(r < 1e-8, "{chi} t={t}: {r}");
                }
            }
        }
    }

    #[test]
    fn functional_equation_off_line() {
        let chi = &enumerate_characters(11, CharacterFilter::Primitive)[3];
        assert!(functional_equation_residual(chi, Complex64::new(0.2, 3.0)).unwrap() < 1e-8);
    }

    #[test]
    fn euler_factors() {
        for q in [9u64, 12, 15, 20, 45] {
            for chi in enumerate_characters(q, CharacterFilter::All) {
                if chi.is_trivial() {
                    continue;
                }
                let r = euler_factor_residual(&chi, Complex64::new(0.5, 2.0)).unwrap();
                assert!(r < 1e-9, "{chi}: {r}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let chi = &enumerate_characters(13, CharacterFilter::Primitive)[4];
        let a = dirichlet_l(Complex64::new(0.5, 3.0), chi).unwrap().value;
        let b = dirichlet_l(Complex64::new(0.5, -3.0), &chi.conj()).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-12);
    }
}
