//! Empirical diagnostics: the Weyl-exponent ratio of `L(1/2 + it, χ)` and
//! the maximum of character partial sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfunc::dirichlet::{dirichlet_l, HurwitzTable};

fn require_primitive(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_primitive() {
        Ok(())
    } else {
        Err(Error::NotPrimitive { modulus: chi.modulus(), conductor: chi.conductor() })
    }
}

fn weyl_scale(q: u64, t: f64) -> f64 {
    (q as f64 * (1.0 + t.abs())).powf(1.0 / 6.0)
}

/// `|L(1/2 + it, χ)| / (q(1 + |t|))^{1/6}`.
pub fn weyl_ratio(chi: &DirichletCharacter, t: f64) -> Result<f64> {
    require_primitive(chi)?;
    let l = dirichlet_l(Complex64::new(0.5, t), chi)?;
    Ok(l.value.norm() / weyl_scale(chi.modulus(), t))
}

/// [`weyl_ratio`] against a precomputed table at `s = 1/2 + it`.
pub fn weyl_ratio_with(table: &HurwitzTable, chi: &DirichletCharacter) -> Result<f64> {
    require_primitive(chi)?;
    Ok(table.l_value(chi)?.value.norm() / weyl_scale(chi.modulus(), table.s().im))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSumProfile {
    pub q: u64,
    /// `max_{x ≤ q} |Σ_{n ≤ x} χ(n)|`.
    pub max_abs: f64,
    pub argmax: u64,
    /// `max_x |S(x)| / (x^{1/2} q^{11/64})`.
    pub envelope_11_64: f64,
    /// `max_x |S(x)| / (x^{8/15} q^{7/45})`.
    pub envelope_8_15: f64,
    /// `√q log q`.
    pub polya_vinogradov: f64,
}

pub fn partial_sum_profile(chi: &DirichletCharacter) -> Result<PartialSumProfile> {
    require_primitive(chi)?;
    let q = chi.modulus();
    let qf = q as f64;
    let values = chi.table().values(chi.group().roots());
    let mut s = Complex64::new(0.0, 0.0);
    let (mut max_abs, mut argmax, mut e1, mut e2) = (0.0f64, 0, 0.0f64, 0.0f64);
    for x in 1..=q {
        s += values[(x % q) as usize];
        let a = s.norm();
        if a > max_abs + 1e-12 {
            max_abs = a;
            argmax = x;
        }
        let xf = x as f64;
        e1 = e1.max(a / (xf.sqrt() * qf.powf(11.0 / 64.0)));
        e2 = e2.max(a / (xf.powf(8.0 / 15.0) * qf.powf(7.0 / 45.0)));
    }
    Ok(PartialSumProfile {
        q,
        max_abs,
        argmax,
        envelope_11_64: e1,
        envelope_8_15: e2,
        polya_vinogradov: qf.sqrt() * qf.ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, CharacterFilter, DirichletGroup};

    #[test]
    fn zeta_ratio() {
        let r = weyl_ratio(&DirichletGroup::get(1).trivial(), 0.0).unwrap();
        assert!((r - 1.4603545088095868).abs() < 1e-12);
    }

    #[test]
    fn quadratic_mod_5() {
        let chi = enumerate_characters(5, CharacterFilter::Primitive).into_iter().find(|c| c.order() == 2).unwrap();
        let p = partial_sum_profile(&chi).unwrap();
        assert_eq!((p.max_abs, p.argmax), (1.0, 1));
    }

    #[test]
    fn ratios_and_envelopes() {
        for q in 3..=60u64 {
            let tables: Vec<_> = [0.0, 1.0, 10.0]
                .iter()
                .map(|&t| HurwitzTable::new(q, Complex64::new(0.5, t)).unwrap())
                .collect();
            for chi in enumerate_characters(q, CharacterFilter::Primitive) {
                for t in &tables {
                    assert!(weyl_ratio_with(t, &chi).unwrap() < 5.0);
                }
                let p = partial_sum_profile(&chi).unwrap();
                assert!(p.max_abs <= p.polya_vinogradov);
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let chi = &enumerate_characters(17, CharacterFilter::Primitive)[5];
        let a = weyl_ratio(chi, 2.5).unwrap();
        let b = weyl_ratio(&chi.conj(), -2.5).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn full_period_vanishes() {
        let chi = &enumerate_characters(11, CharacterFilter::Primitive)[2];
        let values = chi.table().values(chi.group().roots());
        let s: Complex64 = values.iter().sum();
        assert!(s.norm() < 1e-12);
    }
}
