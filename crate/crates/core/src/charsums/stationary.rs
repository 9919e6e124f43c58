//! Stationary-phase reduction of complete two-variable character sums modulo
//! `p^β`: the sum over `(ℤ/p^β)²` collapses to the points `t₀ mod p^α` where
//! the logarithmic derivative vanishes, times `p^{2α}`, and for odd `β` a
//! quadratic Gauss sum modulo `p`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::{inv_mod, prime_power, rem_i};
use crate::characters::{enumerate_characters, postnikov_index, CharacterFilter, DirichletCharacter};
use crate::charsums::gsum::{GKernel, GMethod};
use crate::charsums::hhat::HhatKernel;
use crate::charsums::quadform::{quadratic_gauss, QuadraticFormModP};
use crate::error::{Error, Result};
use crate::report::{Outcome, SweepReport, Tally};
use crate::sum::{pairwise_sum, CharSumValue};

/// A polynomial of degree at most 2 in two variables:
/// `c00 + c10 x + c01 y + c20 x² + c11 xy + c02 y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Poly2 {
    pub c: [i64; 6],
}

impl Poly2 {
    pub const fn new(c00: i64, c10: i64, c01: i64, c20: i64, c11: i64, c02: i64) -> Self {
        Self { c: [c00, c10, c01, c20, c11, c02] }
    }

    pub fn eval(&self, x: i128, y: i128, m: u64) -> u64 {
        let [c00, c10, c01, c20, c11, c02] = self.c.map(|v| v as i128);
        let m = m as i128;
        let (x, y) = (x % m, y % m);
        let v = (c00 + c10 * x + c01 * y + (c20 * x % m) * x + (c11 * x % m) * y + (c02 * y % m) * y).rem_euclid(m);
        v as u64
    }

    pub fn grad(&self, x: i128, y: i128, m: u64) -> [u64; 2] {
        let [_, c10, c01, c20, c11, c02] = self.c.map(|v| v as i128);
        let m = m as i128;
        [
            ((c10 + 2 * c20 * x + c11 * y).rem_euclid(m)) as u64,
            ((c01 + c11 * x + 2 * c02 * y).rem_euclid(m)) as u64,
        ]
    }

    pub fn hessian(&self, m: u64) -> [[u64; 2]; 2] {
        let [_, _, _, c20, c11, c02] = self.c;
        let r = |v: i64| rem_i(v, m);
        [[r(2 * c20), r(c11)], [r(c11), r(2 * c02)]]
    }
}

/// One character factor `χ_i(f_i(p^{s_i} t))` with `f_i = ∏ P_k^{e_k}`.
#[derive(Clone, Debug)]
pub struct Component {
    pub chi: DirichletCharacter,
    /// `ℓ_χ`, modulo `p^{γ−1}`.
    pub ell: u64,
    /// `s = γ − β`.
    pub s: u32,
    pub factors: Vec<(Poly2, i32)>,
}

/// The two sums being compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `χ(u(t−1)/(t(u−1))) ψ(ut − t − u)`, both characters modulo `p^β`.
    Gsum,
    /// `χ((1+y)(1−u)/(1+yu))` at `p^{γ−β}(y, u)` and `ψ(yu)`.
    Hhat,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gsum" => Ok(Family::Gsum),
            "hhat" => Ok(Family::Hhat),
            other => Err(Error::Param(format!("unknown family `{other}`"))),
        }
    }
}

impl Family {
    /// The two components for `(χ, ψ)`; `χ` may live modulo `p^γ` with
    /// `γ ≥ β` in the hhat family.
    pub fn components(self, chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<Vec<Component>> {
        let (p, gamma) = prime_power(chi.modulus())?;
        let (_, beta) = prime_power(psi.modulus())?;
        let ell = |c: &DirichletCharacter| postnikov_index(c, p).map(|i| i.value);
        Ok(match self {
            Family::Gsum => {
                let t = Poly2::new(0, 1, 0, 0, 0, 0);
                let u = Poly2::new(0, 0, 1, 0, 0, 0);
                let t1 = Poly2::new(-1, 1, 0, 0, 0, 0);
                let u1 = Poly2::new(-1, 0, 1, 0, 0, 0);
                let g = Poly2::new(0, -1, -1, 0, 1, 0);
                vec![
                    Component { chi: chi.clone(), ell: ell(chi)?, s: 0, factors: vec![(u, 1), (t1, 1), (t, -1), (u1, -1)] },
                    Component { chi: psi.clone(), ell: ell(psi)?, s: 0, factors: vec![(g, 1)] },
                ]
            }
            Family::Hhat => {
                let y1 = Poly2::new(1, 1, 0, 0, 0, 0);
                let u1 = Poly2::new(1, 0, -1, 0, 0, 0);
                let yu1 = Poly2::new(1, 0, 0, 0, 1, 0);
                let y = Poly2::new(0, 1, 0, 0, 0, 0);
                let u = Poly2::new(0, 0, 1, 0, 0, 0);
                vec![
                    Component { chi: chi.clone(), ell: ell(chi)?, s: gamma - beta, factors: vec![(y1, 1), (u1, 1), (yu1, -1)] },
                    Component { chi: psi.clone(), ell: ell(psi)?, s: 0, factors: vec![(y, 1), (u, 1)] },
                ]
            }
        })
    }
}

/// Exact exponent of `∏_i χ_i(f_i(p^{s_i} t))` as a complex value, or `None`
/// if some factor is not a unit.
fn character_value(comps: &[Component], p: u64, t: [u64; 2]) -> Option<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for c in comps {
        let m = c.chi.modulus();
        let n = c.chi.group().order();
        let ps = p.pow(c.s) as i128;
        let (x, y) = (ps * t[0] as i128, ps * t[1] as i128);
        let mut k = 0u64;
        for (poly, e) in &c.factors {
            let v = poly.eval(x, y, m);
            let kv = c.chi.exponent(v)?;
            k = if *e > 0 { (k + kv) % n } else { (k + n - kv) % n };
        }
        acc *= c.chi.group().roots().get(k);
    }
    Some(acc)
}

fn units_at(comps: &[Component], p: u64, t: [u64; 2]) -> bool {
    comps.iter().all(|c| {
        let ps = p.pow(c.s) as i128;
        c.factors.iter().all(|(poly, _)| poly.eval(ps * t[0] as i128, ps * t[1] as i128, p) != 0)
    })
}

/// `Σ*_{t ∈ (ℤ/p^β)²} ∏_i χ_i(f_i(p^{s_i} t))` by enumeration.
pub fn full_sum(comps: &[Component], p: u64, beta: u32) -> CharSumValue {
    let pb = p.pow(beta);
    let mut terms = Vec::new();
    for a in 0..pb {
        for b in 0..pb {
            if let Some(v) = character_value(comps, p, [a, b]) {
                terms.push(v);
            }
        }
    }
    CharSumValue::new(pairwise_sum(&terms), pb * pb)
}

/// Details of one stationary point.
#[derive(Clone, Debug)]
pub struct StationaryPoint {
    pub t0: [u64; 2],
    pub gauss: Option<QuadraticFormModP>,
}

/// The reduced evaluation.
///
/// `cubic_correction` adds the diagonal third-order term of the logarithm,
/// which survives only when `p = 3`, `β = 3` and the component is not
/// rescaled (`s = 0`). Without it the hhat family fails at `3³`.
pub fn reduced_sum(comps: &[Component], p: u64, beta: u32, cubic_correction: bool) -> Result<(CharSumValue, Vec<StationaryPoint>)> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if beta < 2 {
        return Err(Error::ExponentRange { p, beta, reason: "the reduction needs β ≥ 2" });
    }
    let alpha = beta / 2;
    let odd = beta % 2 == 1;
    let pa = p.pow(alpha);
    let md = if odd { pa * p } else { pa };
    let mut terms = Vec::new();
    let mut points = Vec::new();
    let mut gauss_terms = 1u64;
    for a in 0..pa {
        for b in 0..pa {
            let t0 = [a, b];
            if !units_at(comps, p, t0) {
                continue;
            }
            let mut d = [0u64; 2];
            let mut q2 = [[0u64; 2]; 2];
            let mut cubic = [0u64; 2];
            for c in comps {
                let ps = p.pow(c.s);
                let (x, y) = ((ps * a) as i128, (ps * b) as i128);
                let ell_d = c.ell % md;
                let ell_p = c.ell % p;
                for (poly, e) in &c.factors {
                    let e = *e as i64;
                    let pv = poly.eval(x, y, md);
                    let inv = inv_mod(pv, md).expect("unit factor");
                    let g = poly.grad(x, y, md);
                    for j in 0..2 {
                        let lg = g[j] * inv % md;
                        d[j] = (d[j] + rem_i(e * (ell_d * lg % md) as i64, md)) % md;
                    }
                    if c.s == 0 {
                        let pp = poly.eval(x, y, p);
                        let ip = inv_mod(pp, p).unwrap();
                        let gp = poly.grad(x, y, p);
                        let h = poly.hessian(p);
                        for i in 0..2 {
                            for j in 0..2 {
                                // Hess log P = H/P − ∇P∇Pᵀ/P²
                                let v = (h[i][j] * ip % p + p - gp[i] * gp[j] % p * ip % p * ip % p) % p;
                                q2[i][j] = (q2[i][j] + rem_i(e * (ell_p * v % p) as i64, p)) % p;
                            }
                            let r = gp[i] * ip % p;
                            cubic[i] = (cubic[i] + rem_i(e * (ell_p * (r * r % p * r % p) % p) as i64, p)) % p;
                        }
                    }
                }
            }
            if d.iter().any(|&v| v % pa != 0) {
                continue;
            }
            let chi_val = character_value(comps, p, t0).expect("units checked");
            if odd {
                let mut l = [d[0] / pa, d[1] / pa];
                if cubic_correction && p == 3 && alpha == 1 {
                    l = [(l[0] + cubic[0]) % p, (l[1] + cubic[1]) % p];
                }
                let qf = QuadraticFormModP::new(
                    p,
                    q2.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect(),
                    l.iter().map(|&v| v as i64).collect(),
                )?;
                let g = quadratic_gauss(&qf)?;
                gauss_terms = g.terms;
                terms.push(chi_val * g.value);
                points.push(StationaryPoint { t0, gauss: Some(qf) });
            } else {
                terms.push(chi_val);
                points.push(StationaryPoint { t0, gauss: None });
            }
        }
    }
    let scale = (pa * pa) as f64;
    let value = pairwise_sum(&terms) * scale;
    Ok((CharSumValue::new(value, (pa * pa * gauss_terms).max(1) * (pa * pa)), points))
}

/// Full sum (from the family's own evaluator) against the reduction.
pub fn check_pair(family: Family, chi: &DirichletCharacter, psi: &DirichletCharacter, cubic_correction: bool, tol_unit: f64) -> Result<Outcome> {
    let (p, _) = prime_power(psi.modulus())?;
    let (_, beta) = prime_power(psi.modulus())?;
    let full = match family {
        Family::Gsum => GKernel::new(chi, GMethod::Direct)?.eval(psi),
        Family::Hhat => HhatKernel::new(chi, beta)?.eval(psi),
    };
    let comps = family.components(chi, psi)?;
    let (red, _) = reduced_sum(&comps, p, beta, cubic_correction)?;
    Ok(Outcome::close(full.value, red.value, full.tol_with(tol_unit).max(red.tol_with(tol_unit))))
}

/// Every pair of the family at `p^β` (and, for hhat, every `γ` with
/// `β < γ` and `p^γ ≤ gamma_modulus_max`), checked against the reduction.
pub fn stationary_reduction_check(family: Family, p: u64, beta: u32, gamma_modulus_max: u64, tol_unit: f64) -> Result<SweepReport> {
    stationary_reduction_sweep(family, p, beta, gamma_modulus_max, true, tol_unit)
}

pub fn stationary_reduction_sweep(
    family: Family,
    p: u64,
    beta: u32,
    gamma_modulus_max: u64,
    cubic_correction: bool,
    tol_unit: f64,
) -> Result<SweepReport> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let pb = p.pow(beta);
    let psis = enumerate_characters(pb, CharacterFilter::Primitive);
    let chi_moduli: Vec<u64> = match family {
        Family::Gsum => vec![pb],
        Family::Hhat => (beta + 1..).map(|g| p.pow(g)).take_while(|&m| m <= gamma_modulus_max).collect(),
    };
    let mut tally = Tally::default();
    let mut empty = 0u64;
    for m in chi_moduli {
        for chi in enumerate_characters(m, CharacterFilter::Primitive) {
            let full_kernel = match family {
                Family::Gsum => Kernel::G(GKernel::new(&chi, GMethod::Direct)?),
                Family::Hhat => Kernel::H(HhatKernel::new(&chi, beta)?),
            };
            for psi in &psis {
                let full = full_kernel.eval(psi);
                let comps = family.components(&chi, psi)?;
                let (red, points) = reduced_sum(&comps, p, beta, cubic_correction)?;
                if points.is_empty() {
                    empty += 1;
                }
                let o = Outcome::close(full.value, red.value, full.tol_with(tol_unit).max(red.tol_with(tol_unit)));
                tally.record("stationary.reduction", o, || {
                    json!({ "family": family, "chi": chi, "psi": psi, "cubic_correction": cubic_correction, "tol": tol_unit })
                });
            }
        }
    }
    let mut report = SweepReport::new("stationary")
        .with_param("family", family)
        .with_param("p", p)
        .with_param("beta", beta)
        .with_param("cubic_correction", cubic_correction);
    if family == Family::Hhat {
        report = report.with_param("gamma_modulus_max", gamma_modulus_max);
    }
    report.measure("pairs_without_stationary_points", empty);
    report.absorb(tally);
    Ok(report)
}

enum Kernel {
    G(GKernel),
    H(HhatKernel),
}

impl Kernel {
    fn eval(&self, psi: &DirichletCharacter) -> CharSumValue {
        match self {
            Kernel::G(k) => k.eval(psi),
            Kernel::H(k) => k.eval(psi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_sum_matches_g() {
        let prims = enumerate_characters(9, CharacterFilter::Primitive);
        for chi in &prims {
            for psi in &prims {
                let comps = Family::Gsum.components(chi, psi).unwrap();
                let g = crate::charsums::gsum::g_sum(chi, psi, GMethod::Direct).unwrap();
                assert!(full_sum(&comps, 3, 2).agrees_with(&g));
            }
        }
    }

    #[test]
    fn full_sum_matches_hhat() {
        let chi = &enumerate_characters(125, CharacterFilter::Primitive)[7];
        for psi in enumerate_characters(25, CharacterFilter::Primitive).iter().take(4) {
            let comps = Family::Hhat.components(chi, psi).unwrap();
            let s = crate::charsums::hhat::hhat_sum_direct(chi, psi).unwrap();
            assert!(full_sum(&comps, 5, 2).agrees_with(&s));
        }
    }

    #[test]
    fn gsum_even_and_odd() {
        for (p, beta) in [(3u64, 2u32), (5, 2), (3, 3), (5, 3), (3, 4)] {
            let r = stationary_reduction_check(Family::Gsum, p, beta, 0, 1e-9).unwrap();
            assert!(r.passed(), "p={p} β={beta}: {:?}", r.failures.first());
        }
    }

    #[test]
    fn hhat_family() {
        for (p, beta) in [(3u64, 2u32), (3, 3), (5, 2)] {
            let r = stationary_reduction_check(Family::Hhat, p, beta, 243, 1e-9).unwrap();
            assert!(r.checks > 0);
            assert!(r.passed(), "p={p} β={beta}: {:?}", r.failures.first());
        }
    }

    #[test]
    fn cubic_term_at_27() {
        // harmless for the g family, visible for the hhat family
        let r = stationary_reduction_sweep(Family::Gsum, 3, 3, 0, false, 1e-9).unwrap();
        assert!(r.passed());
        let r = stationary_reduction_sweep(Family::Hhat, 3, 3, 243, false, 1e-9).unwrap();
        assert_eq!((r.failed, r.checks), (1152, 1728));
        let r = stationary_reduction_sweep(Family::Hhat, 3, 3, 243, true, 1e-9).unwrap();
        assert!(r.passed());
        let r = stationary_reduction_sweep(Family::Hhat, 5, 3, 625, false, 1e-9).unwrap();
        assert!(r.passed());
    }
}
