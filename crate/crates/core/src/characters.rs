//! Dirichlet characters as exponent vectors on fixed unit-group generators.
//!
//! A character modulo `q = ∏ p^β` is stored as one exponent per generator of
//! each local unit group. Values are available exactly, as `k mod N` with
//! `χ(x) = e(k/N)` and `N = λ(q)`, and as complex doubles.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factor, gcd, inv_mod, lcm, Factorization};
use crate::error::{Error, Result};
use crate::padic::padic_log;
use crate::sum::Roots;
use crate::units::UnitGroupBasis;

/// Marker for a non-unit in exponent tables.
pub const NOT_UNIT: u32 = u32::MAX;

#[derive(Debug)]
struct LocalGroup {
    p: u64,
    beta: u32,
    pb: u64,
    basis: UnitGroupBasis,
    // exponent of the local unit group (1 for modulus 2)
    order: u64,
    offset: usize,
}

impl LocalGroup {
    /// Exponent `k` mod `self.order` of the local character at `x`.
    fn exponent(&self, exps: &[u64], x: u64) -> Option<u64> {
        let d = self.basis.dlog(x)?;
        let mut k = 0u64;
        for ((&e, &dj), &oj) in exps.iter().zip(d).zip(self.basis.orders()) {
            k = (k + e * dj as u64 % oj * (self.order / oj)) % self.order;
        }
        Some(k)
    }
}

/// The group of Dirichlet characters modulo `q`.
#[derive(Debug)]
pub struct DirichletGroup {
    modulus: Factorization,
    locals: Vec<LocalGroup>,
    order: u64,
    roots: Roots,
}

fn group_cache() -> &'static Mutex<HashMap<u64, Arc<DirichletGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<DirichletGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl DirichletGroup {
    /// The shared group for modulus `q` (built once per process).
    pub fn get(q: u64) -> Arc<Self> {
        assert!((1..=crate::arith::MAX_MODULUS).contains(&q), "modulus {q} out of range");
        let mut cache = group_cache().lock().unwrap();
        cache.entry(q).or_insert_with(|| Arc::new(Self::build(q))).clone()
    }

    fn build(q: u64) -> Self {
        let modulus = factor(q);
        let mut offset = 0;
        let locals: Vec<LocalGroup> = modulus
            .parts()
            .iter()
            .map(|&(p, beta)| {
                let basis = UnitGroupBasis::new(p, beta);
                let order = basis.orders().iter().fold(1, |a, &o| lcm(a, o));
                let local = LocalGroup { p, beta, pb: p.pow(beta), basis, order, offset };
                offset += local.basis.rank();
                local
            })
            .collect();
        let order = locals.iter().fold(1, |a, l| lcm(a, l.order));
        Self { modulus, locals, order, roots: Roots::new(order) }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus.value()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.modulus
    }

    /// Common denominator `N` of exact character values.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn roots(&self) -> &Roots {
        &self.roots
    }

    pub fn size(&self) -> u64 {
        self.modulus.phi()
    }

    /// Total number of generators over all components.
    pub fn rank(&self) -> usize {
        self.locals.iter().map(|l| l.basis.rank()).sum()
    }

    /// Generator orders in storage order.
    pub fn generator_orders(&self) -> Vec<u64> {
        self.locals.iter().flat_map(|l| l.basis.orders().iter().copied()).collect()
    }

    fn exponent(&self, exps: &[u64], x: u64) -> Option<u64> {
        let mut k = 0;
        for l in &self.locals {
            let r = l.basis.rank();
            let lk = l.exponent(&exps[l.offset..l.offset + r], x % l.pb)?;
            k = (k + lk * (self.order / l.order)) % self.order;
        }
        Some(k)
    }

    pub fn trivial(self: &Arc<Self>) -> DirichletCharacter {
        DirichletCharacter { group: self.clone(), exps: vec![0; self.rank()] }
    }

    /// Character with the given exponent vector (reduced modulo the orders).
    pub fn character(self: &Arc<Self>, exps: &[u64]) -> Result<DirichletCharacter> {
        let orders = self.generator_orders();
        if exps.len() != orders.len() {
            return Err(Error::Param(format!(
                "modulus {} needs {} exponents, got {}",
                self.modulus(),
                orders.len(),
                exps.len()
            )));
        }
        let exps = exps.iter().zip(&orders).map(|(&e, &o)| e % o).collect();
        Ok(DirichletCharacter { group: self.clone(), exps })
    }

    /// All characters, lexicographic in the exponent vector.
    pub fn all(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        let orders = self.generator_orders();
        let total: u64 = orders.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        let mut exps = vec![0u64; orders.len()];
        for _ in 0..total {
            out.push(DirichletCharacter { group: self.clone(), exps: exps.clone() });
            for i in (0..exps.len()).rev() {
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
            }
        }
        out
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<DirichletGroup>,
    exps: Vec<u64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

impl std::hash::Hash for DirichletCharacter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus().hash(state);
        self.exps.hash(state);
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ[{}; {:?}]", self.modulus(), self.component_exponents())
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which characters [`enumerate_characters`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterFilter {
    All,
    Primitive,
    Even,
}

/// Exact value table: `exps[x]` is `k` with `χ(x) = e(k/N)`, or [`NOT_UNIT`].
#[derive(Clone, Debug)]
pub struct CharTable {
    pub modulus: u64,
    pub order: u64,
    pub exps: Vec<u32>,
}

impl CharTable {
    #[inline]
    pub fn exp(&self, x: u64) -> Option<u64> {
        let k = self.exps[(x % self.modulus) as usize];
        (k != NOT_UNIT).then_some(k as u64)
    }

    /// Complex values, zero on non-units.
    pub fn values(&self, roots: &Roots) -> Vec<Complex64> {
        self.exps
            .iter()
            .map(|&k| if k == NOT_UNIT { Complex64::new(0.0, 0.0) } else { roots.get(k as u64) })
            .collect()
    }
}

impl DirichletCharacter {
    pub fn group(&self) -> &Arc<DirichletGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.group.modulus
    }

    /// Flat exponent vector in storage order.
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    /// Exponents grouped per prime-power component.
    pub fn component_exponents(&self) -> Vec<Vec<u64>> {
        self.group
            .locals
            .iter()
            .map(|l| self.exps[l.offset..l.offset + l.basis.rank()].to_vec())
            .collect()
    }

    /// `k mod N` with `χ(x) = e(k/N)`, `None` off the units.
    pub fn exponent(&self, x: u64) -> Option<u64> {
        self.group.exponent(&self.exps, x)
    }

    /// Exact value as the pair `(k, N)`.
    pub fn exact(&self, x: u64) -> Option<(u64, u64)> {
        self.exponent(x).map(|k| (k, self.group.order))
    }

    pub fn eval(&self, x: u64) -> Complex64 {
        self.exponent(x).map_or(Complex64::new(0.0, 0.0), |k| self.group.roots.get(k))
    }

    pub fn eval_i(&self, x: i64) -> Complex64 {
        self.eval(crate::arith::rem_i(x, self.modulus()))
    }

    pub fn table(&self) -> CharTable {
        let q = self.modulus();
        let n = self.group.order;
        let mut exps = vec![0u32; q as usize];
        let mut stride = 1u64;
        for l in &self.group.locals {
            let r = l.basis.rank();
            let lexps = &self.exps[l.offset..l.offset + r];
            let scale = n / l.order;
            let local: Vec<u32> = (0..l.pb)
                .map(|x| l.exponent(lexps, x).map_or(NOT_UNIT, |k| (k * scale) as u32))
                .collect();
            for (x, slot) in exps.iter_mut().enumerate() {
                if *slot == NOT_UNIT {
                    continue;
                }
                let k = local[x % l.pb as usize];
                *slot = if k == NOT_UNIT { NOT_UNIT } else { ((*slot as u64 + k as u64) % n) as u32 };
            }
            stride *= l.pb;
        }
        debug_assert_eq!(stride, q);
        CharTable { modulus: q, order: n, exps }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn check_same_group(&self, other: &Self) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        let orders = self.group.generator_orders();
        let exps = self.exps.iter().zip(&other.exps).zip(&orders).map(|((a, b), o)| (a + b) % o).collect();
        Ok(Self { group: self.group.clone(), exps })
    }

    pub fn conj(&self) -> Self {
        let orders = self.group.generator_orders();
        let exps = self.exps.iter().zip(&orders).map(|(&a, &o)| (o - a) % o).collect();
        Self { group: self.group.clone(), exps }
    }

    pub fn pow(&self, k: u64) -> Self {
        let orders = self.group.generator_orders();
        let exps = self.exps.iter().zip(&orders).map(|(&a, &o)| a * (k % o) % o).collect();
        Self { group: self.group.clone(), exps }
    }

    /// Order of the character in the group.
    pub fn order(&self) -> u64 {
        self.group
            .generator_orders()
            .iter()
            .zip(&self.exps)
            .fold(1, |acc, (&o, &e)| lcm(acc, o / gcd(e, o)))
    }

    pub fn is_even(&self) -> bool {
        self.exponent(self.modulus() - 1 + u64::from(self.modulus() == 1)) == Some(0)
    }

    /// Local conductor exponent `c` (conductor `p^c`) of component `i`.
    fn local_conductor_exponent(&self, i: usize) -> u32 {
        let l = &self.group.locals[i];
        let e = &self.exps[l.offset..l.offset + l.basis.rank()];
        match (l.p, l.beta) {
            (2, 1) => 0,
            (2, 2) => {
                if e[0] == 0 {
                    0
                } else {
                    2
                }
            }
            (2, b) => {
                let (eps, k) = (e[0], e[1]);
                if k != 0 {
                    b - crate::arith::valuation(k, 2)
                } else if eps == 1 {
                    2
                } else {
                    0
                }
            }
            (p, b) => {
                let a = e[0];
                if a == 0 {
                    0
                } else {
                    b - crate::arith::valuation(a, p).min(b - 1)
                }
            }
        }
    }

    /// Conductor exponents per component, aligned with the factorization.
    pub fn conductor_exponents(&self) -> Vec<u32> {
        (0..self.group.locals.len()).map(|i| self.local_conductor_exponent(i)).collect()
    }

    pub fn conductor(&self) -> u64 {
        self.group
            .locals
            .iter()
            .zip(self.conductor_exponents())
            .map(|(l, c)| l.p.pow(c))
            .product()
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// Component at the prime `p` as a character modulo `p^β`.
    pub fn component(&self, p: u64) -> Option<Self> {
        let l = self.group.locals.iter().find(|l| l.p == p)?;
        let g = DirichletGroup::get(l.pb);
        Some(Self { group: g, exps: self.exps[l.offset..l.offset + l.basis.rank()].to_vec() })
    }

    /// All components as characters modulo their prime powers.
    pub fn components(&self) -> Vec<Self> {
        self.group.locals.iter().map(|l| self.component(l.p).unwrap()).collect()
    }

    /// The character modulo `m` (with `q | m` or `m | q`) agreeing with this
    /// one on integers coprime to `m·q`. Going down requires the conductor to
    /// divide `m`.
    pub fn transfer(&self, m: u64) -> Result<Self> {
        let q = self.modulus();
        if m % q != 0 && q % m != 0 {
            return Err(Error::NotDivisor(q.min(m), q.max(m)));
        }
        if q % m == 0 && m % self.conductor() != 0 {
            return Err(Error::NotDivisor(self.conductor(), m));
        }
        let target = DirichletGroup::get(m);
        let n = self.group.order;
        let mut exps = Vec::with_capacity(target.rank());
        for tl in &target.locals {
            for (&g, &o) in tl.basis.generators().iter().zip(tl.basis.orders()) {
                // an integer ≡ g at p and ≡ 1 at the other primes of lcm(q, m)
                let big = q.max(m);
                let pb = tl.p.pow(crate::arith::valuation(big, tl.p));
                let rest = big / pb;
                let x = crate::arith::crt_combine(&[g, 1 % rest], &[pb, rest])?;
                let k = self.exponent(x).expect("lifted generator is a unit");
                // χ(g)^{o} = 1, so k·o/N is an integer
                debug_assert_eq!(k * o % n, 0);
                exps.push(k * o / n);
            }
        }
        Ok(Self { group: target, exps })
    }

    /// The primitive character inducing this one.
    pub fn primitive_inducing(&self) -> Self {
        self.transfer(self.conductor()).expect("conductor divides the modulus")
    }

    /// Builds a character from components listed in increasing prime order.
    pub fn from_components(parts: &[Self]) -> Result<Self> {
        let q: u64 = parts.iter().map(|c| c.modulus()).product();
        let g = DirichletGroup::get(q);
        if g.locals.len() != parts.len() {
            return Err(Error::Param("components must be coprime prime powers".into()));
        }
        let mut exps = Vec::new();
        for (l, c) in g.locals.iter().zip(parts) {
            if c.modulus() != l.pb {
                return Err(Error::ModulusMismatch(c.modulus(), l.pb));
            }
            exps.extend_from_slice(&c.exps);
        }
        Ok(Self { group: g, exps })
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterRepr {
    modulus: u64,
    exponents: Vec<Vec<u64>>,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterRepr { modulus: self.modulus(), exponents: self.component_exponents() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CharacterRepr::deserialize(d)?;
        if r.modulus == 0 || r.modulus > crate::arith::MAX_MODULUS {
            return Err(D::Error::custom(format!("modulus {} out of range", r.modulus)));
        }
        let g = DirichletGroup::get(r.modulus);
        let flat: Vec<u64> = r.exponents.into_iter().flatten().collect();
        g.character(&flat).map_err(D::Error::custom)
    }
}

/// Characters modulo `q` passing `filter`.
pub fn enumerate_characters(q: u64, filter: CharacterFilter) -> Vec<DirichletCharacter> {
    let all = DirichletGroup::get(q).all();
    match filter {
        CharacterFilter::All => all,
        CharacterFilter::Primitive => all.into_iter().filter(|c| c.is_primitive()).collect(),
        CharacterFilter::Even => all.into_iter().filter(|c| c.is_even()).collect(),
    }
}

/// `conductor(χ)` as a free function.
pub fn conductor(chi: &DirichletCharacter) -> u64 {
    chi.conductor()
}

/// The index `ℓ_χ` of the logarithmic form of `χ` on `1 + pℤ` (or `1 + 4ℤ`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PostnikovIndex {
    pub p: u64,
    pub beta: u32,
    /// `p^{β-1}` for odd `p`, `2^{β-2}` for `p = 2`.
    pub modulus: u64,
    pub value: u64,
}

/// Step `s` of the logarithm's domain `1 + sℤ`.
fn log_step(p: u64) -> u64 {
    if p == 2 {
        4
    } else {
        p
    }
}

/// Exact exponent of `χ(x)` in units of `1/p^β` for `x ≡ 1 mod p` (or 4).
/// `chi` must be a character modulo `p^β`.
pub fn local_exponent_pb(chi: &DirichletCharacter, x: u64) -> u64 {
    let q = chi.modulus();
    let n = chi.group.order;
    let k = chi.exponent(x).expect("x is a unit");
    // the value has p-power order, so k·q/N is integral
    let num = k as u128 * q as u128;
    debug_assert_eq!(num % n as u128, 0);
    (num / n as u128) as u64 % q
}

/// `ℓ_χ` for the component of `χ` at `p`.
pub fn postnikov_index(chi: &DirichletCharacter, p: u64) -> Result<PostnikovIndex> {
    let local = chi.component(p).ok_or(Error::NotDivisor(p, chi.modulus()))?;
    let beta = chi.factorization().valuation(p);
    let min_beta = if p == 2 { 3 } else { 2 };
    if beta < min_beta {
        return Err(Error::ExponentRange { p, beta, reason: "index needs β ≥ 2 (odd p) or β ≥ 3 (p = 2)" });
    }
    let pb = p.pow(beta);
    let s = log_step(p);
    let m = pb / s;
    // χ(1+s) = e_{p^β}(a·s) and log(1+s) = s·u with u a unit
    let a_s = local_exponent_pb(&local, 1 + s);
    debug_assert_eq!(a_s % s, 0);
    let a = a_s / s;
    let u = padic_log(1 + s, p, beta)? / s;
    let value = a % m * inv_mod(u % m, m).expect("log(1+s)/s is a unit") % m;
    Ok(PostnikovIndex { p, beta, modulus: m, value })
}

/// `ℓ` with `χ(1 + h u) = e_{q/h_q}(ℓ h' u)` for all `u`, where `h_q = (h, q)`
/// and `h = h' h_q`.
///
/// Needs `q | h²` and `v_p(h) < v_p(q)` at every `p | q` (when `q | h` the
/// additive character is trivial and callers use the degenerate branch).
pub fn conductor_drop_index(chi: &DirichletCharacter, h: u64) -> Result<u64> {
    let q = chi.modulus();
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: q, conductor: chi.conductor() });
    }
    if h == 0 || (h as u128 * h as u128) % q as u128 != 0 {
        return Err(Error::Precondition(format!("q = {q} must divide h² (h = {h})")));
    }
    for &(p, b) in chi.factorization().parts() {
        if crate::arith::valuation(h, p) >= b {
            return Err(Error::Precondition(format!(
                "v_{p}(h) ≥ v_{p}(q) for h = {h}, q = {q}: the additive character is trivial there"
            )));
        }
    }
    let hq = gcd(h, q);
    let m = q / hq;
    let hp = (h / hq) % m;
    let k = chi.exponent((1 + h) % q).expect("1 + h is a unit");
    let n = chi.group.order;
    let num = k as u128 * m as u128;
    if num % n as u128 != 0 {
        return Err(Error::Precondition("χ(1+h) is not an m-th root of unity".into()));
    }
    let e = (num / n as u128) as u64 % m;
    Ok(e * inv_mod(hp, m).expect("h' is coprime to q/h_q") % m)
}

/// `{α·ψ : ψ mod d}` with every member taken modulo `q`.
pub fn coset(alpha: &DirichletCharacter, d: u64) -> Result<Vec<DirichletCharacter>> {
    let q = alpha.modulus();
    if d == 0 || q % d != 0 {
        return Err(Error::NotDivisor(d, q));
    }
    if !alpha.is_primitive() {
        return Err(Error::NotPrimitive { modulus: q, conductor: alpha.conductor() });
    }
    coset_unchecked(alpha, d)
}

/// [`coset`] without the primitivity requirement on `α`.
pub fn coset_unchecked(alpha: &DirichletCharacter, d: u64) -> Result<Vec<DirichletCharacter>> {
    let q = alpha.modulus();
    if d == 0 || q % d != 0 {
        return Err(Error::NotDivisor(d, q));
    }
    DirichletGroup::get(d)
        .all()
        .iter()
        .map(|psi| psi.transfer(q).and_then(|lifted| alpha.mul(&lifted)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::phi;

    fn brute_conductor(chi: &DirichletCharacter) -> u64 {
        let q = chi.modulus();
        factor(q)
            .divisors()
            .into_iter()
            .find(|&d| (1..q).filter(|&x| gcd(x, q) == 1 && x % d == 1 % d).all(|x| chi.exponent(x) == Some(0)))
            .unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_characters(1, CharacterFilter::All).len(), 1);
        assert_eq!(enumerate_characters(9, CharacterFilter::All).len(), 6);
        assert_eq!(enumerate_characters(9, CharacterFilter::Primitive).len(), 4);
        assert_eq!(enumerate_characters(8, CharacterFilter::All).len(), 4);
        assert_eq!(enumerate_characters(8, CharacterFilter::Primitive).len(), 2);
        for q in 1..200 {
            let all = enumerate_characters(q, CharacterFilter::All);
            assert_eq!(all.len() as u64, phi(q));
            let even = all.iter().filter(|c| c.is_even()).count() as u64;
            assert_eq!(even, if q <= 2 { 1 } else { phi(q) / 2 });
        }
    }

    #[test]
    fn multiplicative_and_supported_on_units() {
        for q in [1u64, 2, 4, 8, 9, 12, 16, 25, 45, 60, 64, 81] {
            for chi in enumerate_characters(q, CharacterFilter::All) {
                assert_eq!(chi.exponent(1 % q.max(2)), Some(0));
                let table = chi.table();
                for x in 0..q {
                    assert_eq!(table.exp(x).is_some(), gcd(x, q) == 1);
                    assert_eq!(table.exp(x), chi.exponent(x));
                    for y in 0..q {
                        if gcd(x * y, q) == 1 {
                            let lhs = chi.exponent(x * y % q).unwrap();
                            let rhs = (chi.exponent(x).unwrap() + chi.exponent(y).unwrap()) % chi.group().order();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conductor_matches_scan() {
        for q in 1..130u64 {
            for chi in enumerate_characters(q, CharacterFilter::All) {
                assert_eq!(chi.conductor(), brute_conductor(&chi), "{chi:?}");
            }
        }
    }

    #[test]
    fn quadratic_mod_9_has_conductor_3() {
        let quad: Vec<_> = enumerate_characters(9, CharacterFilter::All).into_iter().filter(|c| c.order() == 2).collect();
        assert_eq!(quad.len(), 1);
        assert_eq!(quad[0].conductor(), 3);
    }

    #[test]
    fn transfer_and_inducing() {
        for q in [9u64, 12, 27, 32, 45, 100] {
            for chi in enumerate_characters(q, CharacterFilter::All) {
                let prim = chi.primitive_inducing();
                assert!(prim.is_primitive());
                for x in 0..q {
                    if gcd(x, q) == 1 {
                        assert_eq!(chi.eval(x), prim.eval(x % prim.modulus()));
                    }
                }
                let up = chi.transfer(q * 6).unwrap();
                for x in 0..6 * q {
                    if gcd(x, 6 * q) == 1 {
                        assert!((up.eval(x) - chi.eval(x % q)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn components_recombine() {
        for chi in enumerate_characters(360, CharacterFilter::All) {
            let back = DirichletCharacter::from_components(&chi.components()).unwrap();
            assert_eq!(back, chi);
            for x in 0..360 {
                let prod: Complex64 = chi.components().iter().map(|c| c.eval(x % c.modulus())).product();
                assert!((prod - chi.eval(x)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        for chi in enumerate_characters(72, CharacterFilter::All) {
            let s = serde_json::to_string(&chi).unwrap();
            let back: DirichletCharacter = serde_json::from_str(&s).unwrap();
            assert_eq!(back, chi);
        }
        let chi = &enumerate_characters(45, CharacterFilter::Primitive)[0];
        assert_eq!(serde_json::to_string(chi).unwrap(), r#"{"modulus":45,"exponents":[[1],[1]]}"#);
    }

    #[test]
    fn postnikov_examples() {
        let g27 = DirichletGroup::get(27);
        assert_eq!(postnikov_index(&g27.trivial(), 3).unwrap().value, 0);
        for chi in g27.all() {
            let l1 = postnikov_index(&chi, 3).unwrap();
            let l2 = postnikov_index(&chi.pow(2), 3).unwrap();
            assert_eq!(l2.value, 2 * l1.value % l1.modulus);
        }
        let mut hits = [0; 5];
        for chi in enumerate_characters(25, CharacterFilter::All) {
            hits[postnikov_index(&chi, 5).unwrap().value as usize] += 1;
        }
        assert_eq!(hits, [4; 5]);
        assert!(matches!(postnikov_index(&g27.trivial().transfer(3).unwrap(), 3), Err(Error::ExponentRange { .. })));
    }

    #[test]
    fn postnikov_identity_small() {
        for &(p, b) in &[(3u64, 2u32), (3, 4), (5, 3), (2, 3), (2, 5), (7, 2)] {
            let pb = p.pow(b);
            let s = log_step(p);
            for chi in enumerate_characters(pb, CharacterFilter::All) {
                let l = postnikov_index(&chi, p).unwrap();
                for t in 0..pb / s {
                    let x = 1 + s * t;
                    let lhs = local_exponent_pb(&chi, x);
                    let rhs = l.value * padic_log(x, p, b).unwrap() % pb;
                    assert_eq!(lhs, rhs, "{chi:?} t={t}");
                }
            }
        }
    }

    #[test]
    fn drop_index_examples() {
        for chi in enumerate_characters(9, CharacterFilter::Primitive) {
            let l = conductor_drop_index(&chi, 3).unwrap();
            assert_eq!(gcd(l, 9), 1);
            for u in 0..9u64 {
                let lhs = chi.eval((1 + 3 * u) % 9);
                let rhs = crate::sum::e_q((l * u) as i64, 3);
                assert!((lhs - rhs).norm() < 1e-12);
            }
            let pn = postnikov_index(&chi, 3).unwrap();
            assert_eq!(l % 3, pn.value % 3);
            assert!(conductor_drop_index(&chi, 9).is_err());
        }
        let prim = enumerate_characters(45, CharacterFilter::Primitive);
        assert!(conductor_drop_index(&prim[0], 15).is_err());
    }

    #[test]
    fn coset_examples() {
        let alpha = enumerate_characters(27, CharacterFilter::Primitive)[0].clone();
        assert_eq!(coset(&alpha, 1).unwrap(), vec![alpha.clone()]);
        let c = coset(&alpha, 9).unwrap();
        assert_eq!(c.len(), 6);
        let distinct: std::collections::HashSet<_> = c.iter().collect();
        assert_eq!(distinct.len(), 6);
        let full: std::collections::HashSet<_> = coset(&alpha, 27).unwrap().into_iter().collect();
        assert_eq!(full.len(), 18);
        assert!(matches!(coset(&alpha, 4), Err(Error::NotDivisor(4, 27))));
    }
}
