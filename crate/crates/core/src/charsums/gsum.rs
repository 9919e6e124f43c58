//! The two-variable sum
//! `g(χ, ψ) = Σ_{t,u} χ(t) χ̄(t+1) χ̄(u) χ(u+1) ψ(ut − 1)`
//! for primitive `χ, ψ` modulo `q = p^β`, and its bounds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, prime_power, valuation};
use crate::characters::{enumerate_characters, postnikov_index, CharacterFilter, DirichletCharacter};
use crate::charsums::rho::rho;
use crate::error::{Error, Result};
use crate::report::Outcome;
use crate::sum::{pairwise_sum, CharSumValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GMethod {
    /// The defining sum with argument `ut − 1`.
    Direct,
    /// After `t → t − 1, u → u − 1`: `Σ* χ(u(t−1)/(t(u−1))) ψ(ut − t − u)`.
    Shifted,
}

impl std::str::FromStr for GMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(GMethod::Direct),
            "shifted" => Ok(GMethod::Shifted),
            other => Err(Error::Param(format!("unknown g method `{other}`"))),
        }
    }
}

/// The `χ`-part of `g` collapsed onto the argument of `ψ`:
/// `g(χ, ψ) = Σ_v ψ(v) W(v)`.
///
/// Building the kernel costs `O(q²)`; each `ψ` then costs `O(q)`.
#[derive(Clone, Debug)]
pub struct GKernel {
    modulus: u64,
    method: GMethod,
    weights: Vec<Complex64>,
    terms: u64,
}

fn check_pair(chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<()> {
    if chi.modulus() != psi.modulus() {
        return Err(Error::ModulusMismatch(chi.modulus(), psi.modulus()));
    }
    prime_power(chi.modulus())?;
    for c in [chi, psi] {
        if !c.is_primitive() {
            return Err(Error::NotPrimitive { modulus: c.modulus(), conductor: c.conductor() });
        }
    }
    Ok(())
}

impl GKernel {
    pub fn new(chi: &DirichletCharacter, method: GMethod) -> Result<Self> {
        let q = chi.modulus();
        prime_power(q)?;
        if !chi.is_primitive() {
            return Err(Error::NotPrimitive { modulus: q, conductor: chi.conductor() });
        }
        let table = chi.table();
        let n = chi.group().order();
        let roots = chi.group().roots();
        let mut weights = vec![Complex64::new(0.0, 0.0); q as usize];
        let mut terms = 0u64;
        match method {
            GMethod::Direct => {
                // A(t) = χ(t) χ̄(t+1) as an exponent mod N
                let a: Vec<(u64, u64)> = (0..q)
                    .filter_map(|t| {
                        let x = table.exp(t)?;
                        let y = table.exp((t + 1) % q)?;
                        Some((t, (x + n - y) % n))
                    })
                    .collect();
                for &(t, at) in &a {
                    for &(u, au) in &a {
                        let v = (u * t + q - 1) % q;
                        weights[v as usize] += roots.get((at + n - au) % n);
                    }
                }
                terms = (a.len() * a.len()) as u64;
            }
            GMethod::Shifted => {
                let inv: Vec<Option<u64>> = (0..q).map(|x| inv_mod(x, q)).collect();
                let ok = |x: u64| x % q != 0 && inv[(x % q) as usize].is_some();
                let good: Vec<u64> = (0..q).filter(|&t| ok(t) && ok(t + q - 1)).collect();
                for &t in &good {
                    let ti = inv[t as usize].unwrap();
                    let tm = (t + q - 1) % q;
                    for &u in &good {
                        let um = (u + q - 1) % q;
                        let num = u * tm % q;
                        let den_inv = ti * inv[um as usize].unwrap() % q;
                        let k = table.exp(num * den_inv % q).expect("unit argument");
                        let v = (u * t % q + 2 * q - t - u) % q;
                        weights[v as usize] += roots.get(k);
                        terms += 1;
                    }
                }
            }
        }
        Ok(Self { modulus: q, method, weights, terms })
    }

    pub fn method(&self) -> GMethod {
        self.method
    }

    /// `g(χ, ψ)` for `ψ` modulo the same `q`; primitivity of `ψ` is the
    /// caller's responsibility.
    pub fn eval(&self, psi: &DirichletCharacter) -> CharSumValue {
        debug_assert_eq!(psi.modulus(), self.modulus);
        let table = psi.table();
        let roots = psi.group().roots();
        let buf: Vec<Complex64> = self
            .weights
            .iter()
            .enumerate()
            .filter_map(|(v, &w)| table.exp(v as u64).map(|k| w * roots.get(k)))
            .collect();
        CharSumValue::new(pairwise_sum(&buf), self.terms)
    }
}

/// `g(χ, ψ)` by the chosen method.
///
/// For `p = 2` and `β ≥ 2` no term survives, since `t(t+1)` is even, and the
/// result is exactly `0`.
pub fn g_sum(chi: &DirichletCharacter, psi: &DirichletCharacter, method: GMethod) -> Result<CharSumValue> {
    check_pair(chi, psi)?;
    Ok(GKernel::new(chi, method)?.eval(psi))
}

/// The data entering the bound on `|g|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GBound {
    /// `A = ℓ_χ ℓ_ψ^{-1} mod p^{β−1}`, lifted to `[0, p^{β−1})`.
    pub a: u64,
    /// `Δ = A² + 4`.
    pub delta: u64,
    pub bound: f64,
}

/// Bound on `|g|` from an integer lift `A`, for odd `p` and `β ≥ 2`.
pub fn g_bound_from_a(a: u64, p: u64, beta: u32) -> Result<f64> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if beta < 2 {
        return Err(Error::EmpiricalOnly(p));
    }
    let q = p.pow(beta) as f64;
    let delta = a as i64 * a as i64 + 4;
    let alpha = beta / 2;
    if beta % 2 == 0 {
        return Ok(q * rho(delta, p, alpha)? as f64);
    }
    if delta as u64 % p != 0 {
        return Ok(2.0 * q);
    }
    if delta as u64 % (p * p) != 0 {
        return Ok(0.0);
    }
    Ok(q * (p as f64).sqrt() * rho(delta / (p * p) as i64, p, alpha - 1)? as f64)
}

pub fn g_bound(chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<GBound> {
    check_pair(chi, psi)?;
    let (p, beta) = prime_power(chi.modulus())?;
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if beta < 2 {
        return Err(Error::EmpiricalOnly(p));
    }
    let lc = postnikov_index(chi, p)?;
    let lp = postnikov_index(psi, p)?;
    let m = lc.modulus;
    let a = lc.value * inv_mod(lp.value, m).expect("ℓ_ψ is a unit for primitive ψ") % m;
    Ok(GBound { a, delta: a * a + 4, bound: g_bound_from_a(a, p, beta)? })
}

/// `v_p(Δ)` capped at `β`, the class used to organise the sizes of `g`.
pub fn delta_class(b: &GBound, p: u64, beta: u32) -> u32 {
    valuation(b.delta, p).min(beta)
}

/// `|g| ≤ bound + tol`, with `g` computed directly.
pub fn g_bound_check(chi: &DirichletCharacter, psi: &DirichletCharacter, tol_unit: f64) -> Result<Outcome> {
    let b = g_bound(chi, psi)?;
    let g = g_sum(chi, psi, GMethod::Direct)?;
    Ok(Outcome::at_most(g.abs(), b.bound, g.tol_with(tol_unit)))
}

/// Direct against shifted evaluation.
pub fn check_methods(direct: &CharSumValue, shifted: &CharSumValue, tol_unit: f64) -> Outcome {
    Outcome::close(direct.value, shifted.value, direct.tol_with(tol_unit).max(shifted.tol_with(tol_unit)))
}

/// Primitive `ψ` with `||g(χ, ψ)| − p^{1/2} q| ≤ tol`, in enumeration order.
pub fn singular_characters(chi: &DirichletCharacter, tol: f64) -> Result<Vec<DirichletCharacter>> {
    let q = chi.modulus();
    let (p, _) = prime_power(q)?;
    let target = (p as f64).sqrt() * q as f64;
    let kernel = GKernel::new(chi, GMethod::Direct)?;
    Ok(enumerate_characters(q, CharacterFilter::Primitive)
        .into_iter()
        .filter(|psi| (kernel.eval(psi).abs() - target).abs() <= tol)
        .collect())
}

/// `max |g(χ, ψ)| / p` over all primitive pairs modulo the prime `p`.
pub fn empirical_prime_constant(p: u64) -> Result<f64> {
    if !crate::arith::is_prime(p) {
        return Err(Error::Param(format!("{p} is not prime")));
    }
    let prims = enumerate_characters(p, CharacterFilter::Primitive);
    let mut best = 0.0f64;
    for chi in &prims {
        let k = GKernel::new(chi, GMethod::Direct)?;
        for psi in &prims {
            best = best.max(k.eval(psi).abs() / p as f64);
        }
    }
    Ok(best)
}

/// First primitive character mod `q` of order greater than 2.
pub fn first_nonquadratic_primitive(q: u64) -> Option<DirichletCharacter> {
    enumerate_characters(q, CharacterFilter::Primitive).into_iter().find(|c| c.order() > 2)
}
